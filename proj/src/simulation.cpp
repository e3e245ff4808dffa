#include "consensus_lab/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "consensus_lab/analysis.hpp"

namespace consensus_lab {

SwitchedNetwork SwitchedNetwork::single(WeightedGraph g) {
    SwitchedNetwork net;
    net.graphs.push_back(std::move(g));
    return net;
}

void SwitchedNetwork::validate() const {
    if (graphs.empty()) throw std::invalid_argument("network: empty topology collection");
    const std::size_t n = graphs.front().vertex_count();
    for (const auto& g : graphs)
        if (g.vertex_count() != n)
            throw std::invalid_argument("network: topologies differ in vertex count");
    if (schedule.empty()) throw std::invalid_argument("network: empty schedule");
    if (schedule.front().t_start != 0.0)
        throw std::invalid_argument("network: schedule must start at t = 0");
    if (!(dwell_min > 0.0)) throw std::invalid_argument("network: dwell_min must be positive");
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (schedule[k].graph >= graphs.size())
            throw std::invalid_argument("network: schedule refers to graph " +
                                        std::to_string(schedule[k].graph) + " of " +
                                        std::to_string(graphs.size()));
        if (k > 0) {
            const double gap = schedule[k].t_start - schedule[k - 1].t_start;
            if (!(gap > 0.0))
                throw std::invalid_argument("network: schedule times must be strictly increasing");
            // Small relative allowance for gaps written in decimal.
            if (gap < dwell_min * (1.0 - 1e-9))
                throw std::invalid_argument("network: switch at t = " +
                                            std::to_string(schedule[k].t_start) +
                                            " violates the minimum dwell time");
        }
    }
}

std::size_t SwitchedNetwork::vertex_count() const {
    if (graphs.empty()) throw std::invalid_argument("network: empty topology collection");
    return graphs.front().vertex_count();
}

std::size_t sigma_at(const SwitchedNetwork& net, double t) {
    if (t < 0.0) throw std::invalid_argument("sigma_at: negative time");
    if (net.schedule.empty()) throw std::invalid_argument("sigma_at: empty schedule");
    auto it = std::upper_bound(net.schedule.begin(), net.schedule.end(), t,
                               [](double value, const SwitchEntry& e) { return value < e.t_start; });
    if (it == net.schedule.begin()) return net.schedule.front().graph;
    return std::prev(it)->graph;
}

std::vector<SwitchEntry> random_schedule(std::size_t graph_count, double t_end, double dwell,
                                         double spread, std::uint64_t seed) {
    if (graph_count == 0) throw std::invalid_argument("random_schedule: no graphs");
    if (!(dwell > 0.0) || spread < 1.0)
        throw std::invalid_argument("random_schedule: need dwell > 0 and spread >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> gap(dwell, dwell * spread);
    std::uniform_int_distribution<std::size_t> pick(0, graph_count - 1);

    std::vector<SwitchEntry> out{{0.0, pick(rng)}};
    double t = gap(rng);
    while (t < t_end && graph_count > 1) {
        std::size_t next = pick(rng);
        while (next == out.back().graph) next = pick(rng);
        out.push_back({t, next});
        t += gap(rng);
    }
    return out;
}

DisturbanceModel DisturbanceModel::sinusoid(double amp, double freq, double phase) {
    DisturbanceModel d;
    d.kind = DisturbanceKind::sinusoid;
    d.amplitude = {amp};
    d.frequency = freq;
    d.phase_step = phase;
    return d;
}

namespace {
double amplitude_of(const DisturbanceModel& dist, std::size_t i) {
    return dist.amplitude.size() == 1 ? dist.amplitude.front() : dist.amplitude[i];
}
}  // namespace

void DisturbanceModel::validate(std::size_t n) const {
    if (kind == DisturbanceKind::zero) return;
    if (kind == DisturbanceKind::sinusoid) {
        if (amplitude.size() != 1 && amplitude.size() != n)
            throw std::invalid_argument("disturbance: amplitude needs 1 or n entries");
        for (double a : amplitude)
            if (!(a >= 0.0)) throw std::invalid_argument("disturbance: amplitude must be >= 0");
        return;
    }
    if (table_times.empty() || table_times.size() != table_values.size())
        throw std::invalid_argument("disturbance: table times and rows must match and be non-empty");
    for (std::size_t r = 0; r < table_times.size(); ++r) {
        if (r > 0 && !(table_times[r] > table_times[r - 1]))
            throw std::invalid_argument("disturbance: table times must be strictly increasing");
        if (table_values[r].size() != n)
            throw std::invalid_argument("disturbance: table row has wrong length");
    }
    if (!amplitude.empty() && (amplitude.size() == 1 || amplitude.size() == n)) {
        for (const auto& row : table_values)
            for (std::size_t i = 0; i < n; ++i)
                if (std::abs(row[i]) > amplitude_of(*this, i))
                    throw std::invalid_argument("disturbance: table value exceeds its bound L_i");
    }
}

void disturbance_into(const DisturbanceModel& dist, double t, std::span<double> d) {
    switch (dist.kind) {
        case DisturbanceKind::zero:
            std::fill(d.begin(), d.end(), 0.0);
            return;
        case DisturbanceKind::sinusoid:
            for (std::size_t i = 0; i < d.size(); ++i)
                d[i] = amplitude_of(dist, i) *
                       std::sin(dist.frequency * t + static_cast<double>(i + 1) * dist.phase_step);
            return;
        case DisturbanceKind::table: {
            auto it = std::upper_bound(dist.table_times.begin(), dist.table_times.end(), t);
            if (it == dist.table_times.begin()) {
                std::fill(d.begin(), d.end(), 0.0);
                return;
            }
            const auto& row = dist.table_values[static_cast<std::size_t>(
                std::distance(dist.table_times.begin(), it) - 1)];
            std::copy(row.begin(), row.end(), d.begin());
            return;
        }
    }
}

std::vector<double> disturbance_at(const DisturbanceModel& dist, double t, std::size_t n) {
    if (t < 0.0) throw std::invalid_argument("disturbance_at: negative time");
    dist.validate(n);
    std::vector<double> d(n);
    disturbance_into(dist, t, d);
    return d;
}

std::vector<double> disturbance_bounds(const DisturbanceModel& dist, std::size_t n) {
    std::vector<double> out(n, 0.0);
    switch (dist.kind) {
        case DisturbanceKind::zero: break;
        case DisturbanceKind::sinusoid:
            for (std::size_t i = 0; i < n; ++i) out[i] = amplitude_of(dist, i);
            break;
        case DisturbanceKind::table:
            for (const auto& row : dist.table_values)
                for (std::size_t i = 0; i < n && i < row.size(); ++i)
                    out[i] = std::max(out[i], std::abs(row[i]));
            break;
    }
    return out;
}

namespace {

double spread(std::span<const double> v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

double crossover_scale(const RhoParams& rho) {
    return std::pow(rho.alpha / rho.beta, 1.0 / (rho.q - rho.p));
}

}  // namespace

SimTrace simulate(const SwitchedNetwork& net, std::span<const double> x0,
                  std::span<const ProtocolParams> per_graph, const DisturbanceModel& dist,
                  const SimOptions& opts) {
    net.validate();
    const std::size_t n = net.vertex_count();
    if (x0.size() != n) throw std::invalid_argument("simulate: x0 length differs from vertex count");
    if (!(opts.h > 0.0)) throw std::invalid_argument("simulate: step h must be positive");
    if (!(opts.t_end > 0.0)) throw std::invalid_argument("simulate: t_end must be positive");
    if (opts.record_every == 0) throw std::invalid_argument("simulate: record_every must be >= 1");
    if (opts.max_substeps == 0) throw std::invalid_argument("simulate: max_substeps must be >= 1");
    if (per_graph.size() != 1 && per_graph.size() != net.graphs.size())
        throw std::invalid_argument("simulate: need one protocol or one per topology");
    for (const auto& p : per_graph) p.validate(n);
    dist.validate(n);
    for (double v : x0)
        if (!std::isfinite(v)) throw std::invalid_argument("simulate: x0 must be finite");

    const auto total_steps = static_cast<std::size_t>(std::llround(opts.t_end / opts.h));
    if (total_steps == 0) throw std::invalid_argument("simulate: t_end shorter than one step");

    // Switch steps after snapping to the grid.
    std::vector<std::size_t> switch_step;
    for (const auto& e : net.schedule) {
        if (e.t_start >= opts.t_end)
            throw std::invalid_argument("simulate: schedule entry at t = " + std::to_string(e.t_start) +
                                        " is not before t_end");
        const auto s = static_cast<std::size_t>(std::llround(e.t_start / opts.h));
        if (!switch_step.empty() && s <= switch_step.back())
            throw std::invalid_argument("simulate: two switches snap to the same step; reduce h");
        switch_step.push_back(s);
    }

    auto params_for = [&](std::size_t graph) -> const ProtocolParams& {
        return per_graph.size() == 1 ? per_graph.front() : per_graph[graph];
    };

    SimTrace trace;
    trace.n = n;
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> u(n), d(n), f(n);

    std::size_t schedule_pos = 0;
    auto active_at_step = [&](std::size_t step) {
        while (schedule_pos + 1 < switch_step.size() && switch_step[schedule_pos + 1] <= step)
            ++schedule_pos;
        return net.schedule[schedule_pos].graph;
    };

    auto record = [&](std::size_t step, std::size_t graph) {
        const double t = static_cast<double>(step) * opts.h;
        trace.times.push_back(t);
        trace.states.insert(trace.states.end(), x.begin(), x.end());
        trace.sigma.push_back(graph);
        trace.diameter.push_back(diameter(x));
        if (opts.record_controls) {
            control_into(net.graphs[graph], x, params_for(graph), u);
            trace.controls.insert(trace.controls.end(), u.begin(), u.end());
        }
    };

    // f = u(x) + d(t); returns the spread of f.
    auto evaluate = [&](const WeightedGraph& g, const ProtocolParams& p, double t) {
        control_into(g, x, p, u);
        disturbance_into(dist, t, d);
        for (std::size_t i = 0; i < n; ++i) f[i] = u[i] + d[i];
        return spread(f);
    };

    for (std::size_t step = 0; step < total_steps; ++step) {
        const std::size_t graph = active_at_step(step);
        const WeightedGraph& g = net.graphs[graph];
        const ProtocolParams& p = params_for(graph);
        if (step % opts.record_every == 0) record(step, graph);

        const double t = static_cast<double>(step) * opts.h;
        const double floor = opts.guard_floor >= 0.0 ? opts.guard_floor : crossover_scale(p.rho);
        const double min_sub = opts.h / static_cast<double>(opts.max_substeps);

        double f_spread = evaluate(g, p, t);
        double remaining = opts.h;
        double elapsed = 0.0;
        while (true) {
            double sub = remaining;
            if (opts.max_substeps > 1) {
                const double v = diameter(x);
                if (v > floor && sub * f_spread > opts.guard_fraction * v)
                    sub = std::min(remaining, std::max(min_sub, opts.guard_fraction * v / f_spread));
            }
            for (std::size_t i = 0; i < n; ++i) x[i] += sub * f[i];
            remaining -= sub;
            elapsed += sub;
            // Remainders below a rounding-level fraction of h end the step.
            if (remaining <= opts.h * 1e-12) break;
            ++trace.substeps;
            f_spread = evaluate(g, p, t + elapsed);
        }
        for (double v : x)
            if (!std::isfinite(v)) throw SimulationDiverged(static_cast<double>(step + 1) * opts.h);
    }
    trace.steps = total_steps;
    record(total_steps, active_at_step(total_steps));
    return trace;
}

SimTrace simulate(const SwitchedNetwork& net, std::span<const double> x0,
                  const ProtocolParams& params, const DisturbanceModel& dist,
                  const SimOptions& opts) {
    return simulate(net, x0, std::span<const ProtocolParams>(&params, 1), dist, opts);
}

}  // namespace consensus_lab
