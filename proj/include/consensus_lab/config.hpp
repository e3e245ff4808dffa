#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "consensus_lab/analysis.hpp"
#include "consensus_lab/gain_design.hpp"
#include "consensus_lab/graph.hpp"
#include "consensus_lab/simulation.hpp"

namespace consensus_lab {

// Validation failure with the dotted path of the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct DesignDirective {
    Theorem theorem = Theorem::T4_predefined_static_A;
    std::optional<double> T_c;
    std::optional<double> L;  // defaults to the norm of the disturbance bounds
    double margin = 1.0;
    std::vector<double> kappa_per_graph;  // optional presets for t3
};

struct OutputPaths {
    std::string trace;
    std::string report;
    bool controls = false;
};

struct SimConfig {
    std::string name;
    std::uint64_t seed = 1;

    std::vector<WeightedGraph> graphs;
    std::vector<SwitchEntry> schedule{{0.0, 0}};
    double dwell_min = 0.05;

    ProtocolVariant variant = ProtocolVariant::A;
    RhoParams rho;
    std::vector<double> kappa;                      // explicit per-agent gains
    std::vector<std::vector<double>> kappa_per_graph;
    std::optional<double> zeta;
    std::optional<DesignDirective> design;

    DisturbanceModel disturbance;
    std::vector<double> x0;
    SimOptions sim;
    double settle_tol = 1e-3;
    std::optional<double> T_c;
    OutputPaths output;

    [[nodiscard]] SwitchedNetwork network() const;
    [[nodiscard]] std::optional<double> declared_T_c() const;
    // Cross-field checks; throws ConfigError.
    void validate() const;
};

// Graph object: {"n": int, "edges": [[i, j, w], ...]} or
// {"generator": {"kind": "path|cycle|star|complete|random", "n": ..., ...}}.
// Random generators without their own seed use default_seed.
[[nodiscard]] WeightedGraph graph_from_json(const nlohmann::json& j, std::uint64_t default_seed,
                                            const std::string& path = "graph");
[[nodiscard]] nlohmann::json graph_to_json(const WeightedGraph& g);

[[nodiscard]] RhoParams rho_from_json(const nlohmann::json& j, const std::string& path = "rho");
[[nodiscard]] nlohmann::json rho_to_json(const RhoParams& rho);

[[nodiscard]] SimConfig config_from_json(const nlohmann::json& j);
[[nodiscard]] SimConfig load_config(const std::string& path);

[[nodiscard]] nlohmann::json certificate_to_json(const GainCertificate& cert);
[[nodiscard]] nlohmann::json certificate_report_to_json(const CertificateReport& report);
[[nodiscard]] nlohmann::json settling_to_json(const SettlingReport& r);
[[nodiscard]] nlohmann::json average_to_json(const AverageConsensusReport& r);

}  // namespace consensus_lab
