#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "consensus_lab/analysis.hpp"
#include "consensus_lab/config.hpp"
#include "consensus_lab/gain_design.hpp"
#include "consensus_lab/simulation.hpp"

namespace consensus_lab {

struct ResolvedGains {
    std::optional<GainCertificate> certificate;
    std::vector<ProtocolParams> per_graph;
};

// Applies the design directive (or takes the explicit gains, certifying
// them against the directive's theorem when one is given).
[[nodiscard]] ResolvedGains resolve_gains(const SimConfig& cfg);

struct ExperimentResult {
    SimTrace trace;
    SettlingReport settling;
    std::optional<GainCertificate> certificate;
    AverageConsensusReport average;
    bool diverged = false;
    std::string failure;
    nlohmann::json report;

    // False on divergence, or when a declared T_c was missed.
    [[nodiscard]] bool ok() const;
};

// Designs or validates gains, simulates, analyzes. Writes the trace CSV and
// report JSON named in cfg.output when write_outputs is set. Config errors
// propagate as ConfigError; a blow-up is reported, not thrown.
[[nodiscard]] ExperimentResult run_experiment(const SimConfig& cfg, bool write_outputs = true);

enum class ReproCase { example1, example2, example3, table3 };
[[nodiscard]] const char* to_string(ReproCase c) noexcept;
[[nodiscard]] ReproCase repro_case_from_string(const std::string& s);

struct ReproOptions {
    std::uint64_t seed = 2019;
    // Euler chatter from the sign term scales with h; at 1e-5 the small kp
    // rows and the published example3 offset sit above the 1e-3 band.
    double h = 1e-6;
    std::size_t record_every = 100;
};

struct ReproRow {
    std::string label;
    std::string protocol;
    std::optional<double> t_settle;
    std::optional<double> T_c;
    std::optional<bool> bound_satisfied;
    std::optional<bool> certificate_pass;
    std::string reference_value;  // reference only
    std::string note;
};

struct ReproReport {
    ReproCase which = ReproCase::example1;
    std::vector<ReproRow> rows;
    nlohmann::json details;
    bool all_ok = true;

    [[nodiscard]] std::string table() const;
};

// Published initial vectors.
[[nodiscard]] std::vector<double> example1_x0();
[[nodiscard]] std::vector<double> example2_x0();
[[nodiscard]] std::vector<double> example3_x0();
[[nodiscard]] RhoParams example_rho();
// Three rows of the parameter study, alpha = 1, beta = 2.
[[nodiscard]] std::vector<RhoParams> table3_rhos();
[[nodiscard]] std::vector<double> switched_lambda2_targets();

// Calibrated random 10-node topologies.
[[nodiscard]] std::vector<WeightedGraph> calibrated_collection(std::span<const double> lambda2,
                                                               std::uint64_t seed);

[[nodiscard]] ReproReport reproduce(ReproCase which, const ReproOptions& opts = {});

struct SweepRow {
    std::map<std::string, double> point;
    bool skipped = false;
    std::string reason;
    std::optional<double> t_settle;
    std::optional<double> T_c;
    std::optional<double> slack;  // T_c - t_settle
    std::optional<bool> bound_satisfied;
};

// Cartesian product over keys alpha, beta, p, q, k, T_c, margin, L. Points
// that give an invalid configuration are skipped with the reason. Rows are
// sorted by ascending slack, skipped rows last.
[[nodiscard]] std::vector<SweepRow> sweep(const SimConfig& templ,
                                          const std::map<std::string, std::vector<double>>& grid,
                                          std::size_t threads = 0);
[[nodiscard]] std::map<std::string, std::vector<double>> grid_from_json(const nlohmann::json& j);
[[nodiscard]] std::string sweep_csv(const std::vector<SweepRow>& rows);

// CONSENSUS_LAB_THREADS when set, else the hardware count (at least 1).
[[nodiscard]] std::size_t worker_count();

}  // namespace consensus_lab
