#include "consensus_lab/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace consensus_lab {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace, bool include_controls,
                     std::span<const double> lyapunov) {
    const bool controls = include_controls && !trace.controls.empty();
    const bool with_v = !lyapunov.empty();
    if (with_v && lyapunov.size() != trace.size())
        throw std::invalid_argument("write_trace_csv: Lyapunov column length mismatch");
    out << "t";
    for (std::size_t i = 1; i <= trace.n; ++i) out << ",x_" << i;
    out << ",sigma";
    if (controls)
        for (std::size_t i = 1; i <= trace.n; ++i) out << ",u_" << i;
    out << ",V_diam";
    if (with_v) out << ",V_lyap";
    out << '\n';
    for (std::size_t k = 0; k < trace.size(); ++k) {
        out << format_double(trace.times[k]);
        for (double x : trace.state(k)) out << ',' << format_double(x);
        out << ',' << trace.sigma[k];
        if (controls)
            for (double u : trace.control(k)) out << ',' << format_double(u);
        out << ',' << format_double(trace.diameter[k]);
        if (with_v) out << ',' << format_double(lyapunov[k]);
        out << '\n';
    }
}

void write_trace_csv(const std::string& path, const SimTrace& trace, bool include_controls) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_trace_csv(out, trace, include_controls);
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_number(const std::string& s, std::size_t row) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw std::runtime_error("trace CSV: bad number '" + s + "' on data row " + std::to_string(row));
    return v;
}

}  // namespace

SimTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("trace CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line);
    if (header.size() < 4 || header.front() != "t")
        throw std::runtime_error("trace CSV: header must start with t");
    SimTrace trace;
    std::size_t col = 1;
    while (col < header.size() && header[col].rfind("x_", 0) == 0) ++col;
    trace.n = col - 1;
    if (trace.n == 0 || col >= header.size() || header[col] != "sigma")
        throw std::runtime_error("trace CSV: expected x_1..x_n followed by sigma");
    const std::size_t sigma_col = col++;
    const std::size_t u_begin = col;
    while (col < header.size() && header[col].rfind("u_", 0) == 0) ++col;
    const std::size_t u_count = col - u_begin;
    if (u_count != 0 && u_count != trace.n) throw std::runtime_error("trace CSV: partial control columns");
    if (col >= header.size() || header[col] != "V_diam")
        throw std::runtime_error("trace CSV: missing V_diam column");
    const std::size_t diam_col = col;

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw std::runtime_error("trace CSV: row " + std::to_string(row) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(header.size()));
        trace.times.push_back(parse_number(cells[0], row));
        for (std::size_t i = 0; i < trace.n; ++i) trace.states.push_back(parse_number(cells[1 + i], row));
        trace.sigma.push_back(static_cast<std::size_t>(parse_number(cells[sigma_col], row)));
        for (std::size_t i = 0; i < u_count; ++i) trace.controls.push_back(parse_number(cells[u_begin + i], row));
        trace.diameter.push_back(parse_number(cells[diam_col], row));
    }
    if (trace.times.empty()) throw std::runtime_error("trace CSV: no data rows");
    return trace;
}

SimTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_trace_csv(in);
}

void write_series(std::ostream& out, const std::string& x_name, std::span<const double> x,
                  const std::string& y_name, std::span<const double> y) {
    out << "# " << x_name << ' ' << y_name << '\n';
    for (std::size_t k = 0; k < x.size() && k < y.size(); ++k)
        out << format_double(x[k]) << ' ' << format_double(y[k]) << '\n';
}

}  // namespace consensus_lab
