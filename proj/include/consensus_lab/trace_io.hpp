#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "consensus_lab/simulation.hpp"

namespace consensus_lab {

// Columns: t, x_1..x_n, sigma, [u_1..u_n], V_diam. Values use %.17g so a
// rerun of the same config gives the same bytes.
void write_trace_csv(std::ostream& out, const SimTrace& trace, bool include_controls = false,
                     std::span<const double> lyapunov = {});
void write_trace_csv(const std::string& path, const SimTrace& trace, bool include_controls = false);

// Inverse of write_trace_csv. Throws std::runtime_error on malformed input.
[[nodiscard]] SimTrace read_trace_csv(std::istream& in);
[[nodiscard]] SimTrace read_trace_csv(const std::string& path);

// Two-column gnuplot-friendly data file.
void write_series(std::ostream& out, const std::string& x_name, std::span<const double> x,
                  const std::string& y_name, std::span<const double> y);

[[nodiscard]] std::string format_double(double v);

}  // namespace consensus_lab
