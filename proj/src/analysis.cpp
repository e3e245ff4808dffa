#include "consensus_lab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace consensus_lab {

double diameter(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("diameter: empty state");
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

SettlingReport detect_settling(const SimTrace& trace, double tol_abs, std::optional<double> T_c) {
    if (!(tol_abs > 0.0)) throw std::invalid_argument("detect_settling: tolerance must be positive");
    SettlingReport r;
    r.tol_abs = tol_abs;
    r.bound_T_c = T_c;
    const std::size_t m = trace.diameter.size();
    if (m == 0) {
        if (T_c) r.bound_satisfied = false;
        return r;
    }

    std::size_t first_inside = 0;
    for (std::size_t k = m; k-- > 0;) {
        if (!(trace.diameter[k] <= tol_abs)) {
            first_inside = k + 1;
            break;
        }
    }
    if (first_inside < m) {
        r.settled = true;
        r.t_settle = trace.times[first_inside];
        r.post_settle_max_diameter =
            *std::max_element(trace.diameter.begin() + static_cast<std::ptrdiff_t>(first_inside),
                              trace.diameter.end());
    }
    if (T_c) r.bound_satisfied = r.settled && *r.t_settle <= *T_c;
    return r;
}

namespace {

double centred_quadratic(std::span<const double> x, const WeightedGraph& g) {
    // delta^T Q delta = sum over edges a_ij (delta_i - delta_j)^2.
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double acc = 0.0;
    for (const auto& e : g.edges()) {
        const double diff = (x[e.i] - mean) - (x[e.j] - mean);
        acc += e.weight * diff * diff;
    }
    return acc;
}

void require_dims(const SimTrace& trace, std::size_t n) {
    if (trace.n != n) throw std::invalid_argument("lyapunov trace: dimension mismatch");
}

}  // namespace

std::vector<double> lyapunov_trace_A(const SimTrace& trace, const WeightedGraph& g) {
    require_dims(trace, g.vertex_count());
    const double lambda2 = algebraic_connectivity(g);
    const double n = static_cast<double>(trace.n);
    std::vector<double> v(trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k)
        v[k] = std::sqrt(lambda2 * centred_quadratic(trace.state(k), g)) / n;
    return v;
}

std::vector<double> lyapunov_trace_A(const SimTrace& trace, const SwitchedNetwork& net) {
    require_dims(trace, net.vertex_count());
    std::vector<double> lambda2;
    for (const auto& g : net.graphs) lambda2.push_back(algebraic_connectivity(g));
    const double n = static_cast<double>(trace.n);
    std::vector<double> v(trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const std::size_t l = trace.sigma.at(k);
        v[k] = std::sqrt(lambda2.at(l) * centred_quadratic(trace.state(k), net.graphs[l])) / n;
    }
    return v;
}

std::vector<double> lyapunov_trace_B(const SimTrace& trace, double lambda2_star, double edges_min) {
    if (!(lambda2_star > 0.0) || !(edges_min > 0.0))
        throw std::invalid_argument("lyapunov_trace_B: lambda2_star and M must be positive");
    std::vector<double> v(trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const auto x = trace.state(k);
        // Offsets from x_0 first, so an exact consensus gives exactly zero.
        double mean = 0.0;
        for (double xi : x) mean += xi - x[0];
        mean /= static_cast<double>(x.size());
        double sq = 0.0;
        for (double xi : x) sq += (xi - x[0] - mean) * (xi - x[0] - mean);
        v[k] = std::sqrt(lambda2_star * sq) / edges_min;
    }
    return v;
}

AverageConsensusReport average_consensus_check(const SimTrace& trace, const ProtocolParams& params,
                                               bool undisturbed, double settle_tol) {
    AverageConsensusReport r;
    if (trace.size() == 0) return r;
    const bool equal_gains =
        !params.kappa.empty() &&
        std::all_of(params.kappa.begin(), params.kappa.end(),
                    [&](double kv) { return kv == params.kappa.front(); });
    r.applicable = params.variant == ProtocolVariant::B && equal_gains && undisturbed;

    auto mean_of = [](std::span<const double> x) {
        return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    };
    r.initial_mean = mean_of(trace.state(0));
    for (std::size_t k = 0; k < trace.size(); ++k)
        r.max_mean_drift = std::max(r.max_mean_drift, std::abs(mean_of(trace.state(k)) - r.initial_mean));

    const auto last = trace.state(trace.size() - 1);
    r.final_diameter = diameter(last);
    if (r.final_diameter <= settle_tol) {
        r.consensus_value = mean_of(last);
        r.consensus_error = std::abs(*r.consensus_value - r.initial_mean);
    }
    return r;
}

}  // namespace consensus_lab
