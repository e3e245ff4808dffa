#include "consensus_lab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace consensus_lab {

const char* to_string(ProtocolVariant v) noexcept {
    return v == ProtocolVariant::A ? "A" : "B";
}

void ProtocolParams::validate(std::size_t n) const {
    rho.validate();
    if (!(zeta >= 0.0) || !std::isfinite(zeta))
        throw std::invalid_argument("protocol: zeta must be finite and >= 0");
    if (kappa.empty()) throw std::invalid_argument("protocol: kappa is empty");
    if (n != 0 && kappa.size() != n)
        throw std::invalid_argument("protocol: kappa has " + std::to_string(kappa.size()) +
                                    " entries, expected " + std::to_string(n));
    for (double kv : kappa)
        if (!(kv > 0.0) || !std::isfinite(kv))
            throw std::invalid_argument("protocol: every kappa_i must be positive and finite");
}

double ProtocolParams::min_kappa() const {
    if (kappa.empty()) throw std::invalid_argument("protocol: kappa is empty");
    return *std::min_element(kappa.begin(), kappa.end());
}

double ProtocolParams::max_kappa() const {
    if (kappa.empty()) throw std::invalid_argument("protocol: kappa is empty");
    return *std::max_element(kappa.begin(), kappa.end());
}

double phi(double z, const RhoParams& rho, double zeta) noexcept {
    if (z == 0.0) return 0.0;
    const double mag = poly_rate(std::abs(z), rho) + zeta;
    return z > 0.0 ? mag : -mag;
}

namespace {

void check_sizes(const WeightedGraph& g, std::span<const double> x, const ProtocolParams& params,
                 std::size_t u_size) {
    const std::size_t n = g.vertex_count();
    if (x.size() != n || u_size != n || params.kappa.size() != n)
        throw std::invalid_argument("protocol: dimension mismatch (graph has " + std::to_string(n) +
                                    " vertices)");
}

void fill_A(const WeightedGraph& g, std::span<const double> x, const ProtocolParams& params,
            std::span<double> u) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = 0.0;
        for (const auto& nb : g.neighbors(i)) e += nb.weight * (x[nb.vertex] - x[i]);
        u[i] = params.kappa[i] * phi(e, params.rho, params.zeta);
    }
}

void fill_B(const WeightedGraph& g, std::span<const double> x, const ProtocolParams& params,
            std::span<double> u) {
    std::fill(u.begin(), u.end(), 0.0);
    // Each edge is evaluated once and applied with opposite signs at its two
    // ends, so equal gains give an exactly zero control sum.
    for (const auto& edge : g.edges()) {
        const double s = std::sqrt(edge.weight);
        const double flow = s * phi(s * (x[edge.j] - x[edge.i]), params.rho, params.zeta);
        u[edge.i] += params.kappa[edge.i] * flow;
        u[edge.j] -= params.kappa[edge.j] * flow;
    }
}

}  // namespace

void control_into(const WeightedGraph& g, std::span<const double> x, const ProtocolParams& params,
                  std::span<double> u) {
    check_sizes(g, x, params, u.size());
    if (params.variant == ProtocolVariant::A)
        fill_A(g, x, params, u);
    else
        fill_B(g, x, params, u);
}

std::vector<double> control_A(const WeightedGraph& g, std::span<const double> x,
                              const ProtocolParams& params) {
    if (params.variant != ProtocolVariant::A)
        throw std::invalid_argument("control_A: params are for variant B");
    std::vector<double> u(g.vertex_count());
    control_into(g, x, params, u);
    return u;
}

std::vector<double> control_B(const WeightedGraph& g, std::span<const double> x,
                              const ProtocolParams& params) {
    if (params.variant != ProtocolVariant::B)
        throw std::invalid_argument("control_B: params are for variant A");
    std::vector<double> u(g.vertex_count());
    control_into(g, x, params, u);
    return u;
}

std::vector<double> closed_loop_field(const WeightedGraph& g, std::span<const double> x,
                                      const ProtocolParams& params, std::span<const double> d) {
    if (d.size() != g.vertex_count())
        throw std::invalid_argument("closed_loop_field: disturbance dimension mismatch");
    std::vector<double> xdot(g.vertex_count());
    control_into(g, x, params, xdot);
    for (std::size_t i = 0; i < xdot.size(); ++i) xdot[i] += d[i];
    return xdot;
}

}  // namespace consensus_lab
