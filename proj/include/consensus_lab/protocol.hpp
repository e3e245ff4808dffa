#pragma once

#include <span>
#include <vector>

#include "consensus_lab/fixed_time.hpp"
#include "consensus_lab/graph.hpp"

namespace consensus_lab {

enum class ProtocolVariant {
    A,  // one nonlinearity per agent on the weighted neighbour error
    B,  // one nonlinearity per incident edge; conserves the mean for equal gains
};

[[nodiscard]] const char* to_string(ProtocolVariant v) noexcept;

struct ProtocolParams {
    RhoParams rho;
    double zeta = 0.0;           // robustness offset, >= 0
    std::vector<double> kappa;   // per-agent gains, all > 0
    ProtocolVariant variant = ProtocolVariant::A;

    // Throws std::invalid_argument; pass n = 0 to skip the length check.
    void validate(std::size_t n = 0) const;
    [[nodiscard]] double min_kappa() const;
    [[nodiscard]] double max_kappa() const;
};

// [(alpha|z|^p + beta|z|^q)^k + zeta] sign(z), with sign(0) = 0.
[[nodiscard]] double phi(double z, const RhoParams& rho, double zeta) noexcept;

[[nodiscard]] std::vector<double> control_A(const WeightedGraph& g, std::span<const double> x,
                                            const ProtocolParams& params);
[[nodiscard]] std::vector<double> control_B(const WeightedGraph& g, std::span<const double> x,
                                            const ProtocolParams& params);

// Writes the control of params.variant into u without allocating. Only the
// sizes are checked here; params are assumed validated.
void control_into(const WeightedGraph& g, std::span<const double> x, const ProtocolParams& params,
                  std::span<double> u);

// xdot = u(x) + d for the active topology.
[[nodiscard]] std::vector<double> closed_loop_field(const WeightedGraph& g,
                                                    std::span<const double> x,
                                                    const ProtocolParams& params,
                                                    std::span<const double> d);

}  // namespace consensus_lab
