#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "consensus_lab/fixed_time.hpp"
#include "consensus_lab/graph.hpp"
#include "consensus_lab/protocol.hpp"

namespace consensus_lab {

enum class Theorem {
    T3_fixed_time_A,         // variant A, switched, fixed time (no T_c)
    T4_predefined_static_A,  // variant A, single topology, predefined time
    T5_predefined_switched_B,  // variant B, switched, predefined time
};

[[nodiscard]] const char* to_string(Theorem t) noexcept;
// Accepts "t3", "t4", "t5" (case-insensitive). Throws std::invalid_argument.
[[nodiscard]] Theorem theorem_from_string(const std::string& s);

struct SlackEntry {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // lhs - rhs
    bool pass = false;
};

struct GainCertificate {
    Theorem theorem = Theorem::T4_predefined_static_A;
    ProtocolParams params;
    // Optional per-topology gain presets; when non-empty, entry l replaces
    // params.kappa while graph l is active.
    std::vector<std::vector<double>> kappa_per_graph;
    std::optional<double> T_c;
    double L = 0.0;

    // Quantities the inequalities were evaluated with.
    double gamma = 0.0;
    std::vector<double> lambda2;
    double lambda2_star = 0.0;
    std::size_t edges_min = 0;

    std::vector<SlackEntry> slack;
    std::vector<std::string> notes;

    [[nodiscard]] bool satisfied() const noexcept;
};

struct CertificateReport {
    std::vector<SlackEntry> entries;
    std::vector<std::string> notes;
    bool all_pass = false;
};

// Gain floors as functions of their ingredients.
[[nodiscard]] double static_gain_floor(std::size_t n, double gamma, double lambda2, double T_c);
[[nodiscard]] double switched_gain_floor(std::size_t edges_min, double gamma, double lambda2_star,
                                         double T_c);

// Euclidean norm of per-agent disturbance bounds.
[[nodiscard]] double disturbance_norm_bound(std::span<const double> per_agent);

// Uniform gains at margin * n gamma / (lambda2 T_c); zeta = L / kappa.
[[nodiscard]] GainCertificate design_T4_static_A(const WeightedGraph& g, const RhoParams& rho,
                                                 double T_c, double L, double margin = 1.0);

// Caller supplies one uniform gain per topology; zeta = L / min gain.
[[nodiscard]] GainCertificate design_T3_switched_A(std::span<const WeightedGraph> graphs,
                                                   const RhoParams& rho, double L,
                                                   std::span<const double> kappa_per_graph);

// Per-topology gains from the static floor with reference time T_ref. Only a
// sizing convention: the fixed-time guarantee does not depend on it.
[[nodiscard]] std::vector<double> default_switched_A_gains(std::span<const WeightedGraph> graphs,
                                                           const RhoParams& rho,
                                                           double T_ref = 1.0);

// Uniform gains at margin * M gamma / (lambda2* T_c) with M the smallest
// edge count and lambda2* the smallest algebraic connectivity over the
// collection; zeta = L / (kappa sqrt(lambda2*)).
[[nodiscard]] GainCertificate design_T5_switched_B(std::span<const WeightedGraph> graphs,
                                                   const RhoParams& rho, double T_c, double L,
                                                   double margin = 1.0);

// Recomputes every inequality from the graphs. Never throws on a failed
// inequality; structural problems (wrong graph count, disconnected member)
// are failing entries too.
[[nodiscard]] CertificateReport verify_certificate(const GainCertificate& cert,
                                                   std::span<const WeightedGraph> graphs);

// One ProtocolParams per topology, expanding kappa_per_graph when present.
[[nodiscard]] std::vector<ProtocolParams> gain_schedule(const GainCertificate& cert,
                                                        std::size_t graph_count);

}  // namespace consensus_lab
