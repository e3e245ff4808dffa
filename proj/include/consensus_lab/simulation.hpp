#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "consensus_lab/graph.hpp"
#include "consensus_lab/protocol.hpp"

namespace consensus_lab {

struct SwitchEntry {
    double t_start = 0.0;
    std::size_t graph = 0;

    friend bool operator==(const SwitchEntry&, const SwitchEntry&) = default;
};

// Topology collection plus a piecewise-constant, right-continuous switching
// signal. All graphs share the vertex set.
struct SwitchedNetwork {
    std::vector<WeightedGraph> graphs;
    std::vector<SwitchEntry> schedule{{0.0, 0}};
    double dwell_min = 0.05;

    static SwitchedNetwork single(WeightedGraph g);

    // Throws std::invalid_argument: empty collection, mixed vertex counts,
    // schedule not starting at 0, non-increasing times, gaps below
    // dwell_min, or unknown graph index.
    void validate() const;
    [[nodiscard]] std::size_t vertex_count() const;
};

[[nodiscard]] std::size_t sigma_at(const SwitchedNetwork& net, double t);

// Random schedule over graph_count topologies on [0, t_end): gaps drawn
// uniformly from [dwell, dwell * spread], consecutive indices distinct.
[[nodiscard]] std::vector<SwitchEntry> random_schedule(std::size_t graph_count, double t_end,
                                                       double dwell, double spread,
                                                       std::uint64_t seed);

enum class DisturbanceKind { zero, sinusoid, table };

struct DisturbanceModel {
    DisturbanceKind kind = DisturbanceKind::zero;
    // Per-agent bound L_i. For the sinusoid it is the amplitude; a single
    // entry is broadcast to every agent.
    std::vector<double> amplitude{1.0};
    double frequency = 40.0;   // rad/s
    double phase_step = 0.1;   // rad per agent index (1-based)
    // Zero-order-hold table: row r applies on [table_times[r], table_times[r+1]).
    std::vector<double> table_times;
    std::vector<std::vector<double>> table_values;

    static DisturbanceModel none() { return {}; }
    static DisturbanceModel sinusoid(double amplitude = 1.0, double frequency = 40.0,
                                     double phase_step = 0.1);

    void validate(std::size_t n) const;
};

// d_i(t) for agents i = 1..n (returned 0-based).
[[nodiscard]] std::vector<double> disturbance_at(const DisturbanceModel& dist, double t,
                                                 std::size_t n);
void disturbance_into(const DisturbanceModel& dist, double t, std::span<double> d);

// Bounds L_i with |d_i(t)| <= L_i for all t.
[[nodiscard]] std::vector<double> disturbance_bounds(const DisturbanceModel& dist, std::size_t n);

struct SimOptions {
    double h = 1e-4;
    double t_end = 1.0;
    std::size_t record_every = 10;
    bool record_controls = false;
    // Overshoot guard: while the diameter exceeds guard_floor, a step is
    // split so no sub-step moves the agents' spread by more than
    // guard_fraction of the current diameter. guard_floor < 0 selects the
    // crossover scale (alpha/beta)^(1/(q-p)) of the active parameters.
    // max_substeps = 1 gives plain fixed-step Euler.
    double guard_fraction = 0.1;
    double guard_floor = -1.0;
    std::size_t max_substeps = 4096;
};

struct SimTrace {
    std::size_t n = 0;
    std::vector<double> times;
    std::vector<double> states;    // row-major, times.size() x n
    std::vector<std::size_t> sigma;
    std::vector<double> controls;  // row-major when recorded, else empty
    std::vector<double> diameter;
    std::size_t steps = 0;
    std::size_t substeps = 0;      // extra Euler evaluations from the guard

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] std::span<const double> state(std::size_t k) const {
        return {states.data() + k * n, n};
    }
    [[nodiscard]] std::span<const double> control(std::size_t k) const {
        return {controls.data() + k * n, n};
    }
};

class SimulationDiverged : public std::runtime_error {
public:
    explicit SimulationDiverged(double t)
        : std::runtime_error("simulation diverged (non-finite state) at t = " + std::to_string(t)),
          time(t) {}
    double time;
};

// Explicit Euler on the switched closed loop. per_graph[l] holds the
// protocol used while graph l is active (a single entry is shared by all
// graphs). Switch times are snapped to the nearest step.
[[nodiscard]] SimTrace simulate(const SwitchedNetwork& net, std::span<const double> x0,
                                std::span<const ProtocolParams> per_graph,
                                const DisturbanceModel& dist, const SimOptions& opts);

[[nodiscard]] SimTrace simulate(const SwitchedNetwork& net, std::span<const double> x0,
                                const ProtocolParams& params, const DisturbanceModel& dist,
                                const SimOptions& opts);

}  // namespace consensus_lab
