#pragma once

#include <optional>
#include <span>
#include <vector>

#include "consensus_lab/graph.hpp"
#include "consensus_lab/protocol.hpp"
#include "consensus_lab/simulation.hpp"

namespace consensus_lab {

// max(x) - min(x). Throws std::invalid_argument on an empty vector.
[[nodiscard]] double diameter(std::span<const double> x);

struct SettlingReport {
    bool settled = false;
    std::optional<double> t_settle;
    double tol_abs = 0.0;
    double post_settle_max_diameter = 0.0;
    std::optional<double> bound_T_c;
    std::optional<bool> bound_satisfied;
};

// First recorded time after which the diameter stays <= tol_abs up to the
// end of the trace. A trace whose last sample is outside the band has not
// settled.
[[nodiscard]] SettlingReport detect_settling(const SimTrace& trace, double tol_abs,
                                             std::optional<double> T_c = std::nullopt);

// (1/n) sqrt(lambda2 * delta^T Q delta) with delta the mean-centred state.
[[nodiscard]] std::vector<double> lyapunov_trace_A(const SimTrace& trace, const WeightedGraph& g);

// Same, evaluated with whichever topology the trace reports as active.
[[nodiscard]] std::vector<double> lyapunov_trace_A(const SimTrace& trace, const SwitchedNetwork& net);

// (1/M) sqrt(lambda2_star * delta^T delta); topology independent.
[[nodiscard]] std::vector<double> lyapunov_trace_B(const SimTrace& trace, double lambda2_star,
                                                   double edges_min);

struct AverageConsensusReport {
    bool applicable = false;
    double initial_mean = 0.0;
    double max_mean_drift = 0.0;
    double final_diameter = 0.0;
    std::optional<double> consensus_value;  // set when the run ends inside the band
    std::optional<double> consensus_error;  // |x* - mean(x0)|
};

// The mean is only conserved by variant B with equal gains and no
// disturbance; other runs are reported as not applicable (the drift figures
// are still filled in).
[[nodiscard]] AverageConsensusReport average_consensus_check(const SimTrace& trace,
                                                             const ProtocolParams& params,
                                                             bool undisturbed,
                                                             double settle_tol = 1e-3);

}  // namespace consensus_lab
