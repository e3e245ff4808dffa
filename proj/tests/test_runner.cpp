#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "consensus_lab/runner.hpp"
#include "consensus_lab/trace_io.hpp"

using namespace consensus_lab;
using nlohmann::json;

namespace {

SimConfig pair_config() {
    return config_from_json(json::parse(R"({
        "name": "pair",
        "graphs": [{"n": 2, "edges": [[0, 1, 1.0]]}],
        "protocol": {"variant": "B", "rho": {"alpha": 1, "beta": 1, "p": 0.5, "q": 2, "k": 1}},
        "design": {"theorem": "t5", "T_c": 1.0},
        "x0": [-1.0, 1.0],
        "h": 1e-4,
        "t_end": 1.2
    })"));
}

std::string trace_bytes(const ExperimentResult& r) {
    std::ostringstream out;
    write_trace_csv(out, r.trace);
    return out.str();
}

}  // namespace

TEST_CASE("two-agent predefined-time run") {
    auto r = run_experiment(pair_config(), false);
    CHECK(r.ok());
    CHECK_FALSE(r.diverged);
    REQUIRE(r.certificate);
    CHECK(r.certificate->satisfied());
    REQUIRE(r.settling.t_settle);
    CHECK(*r.settling.t_settle <= 1.0);
    CHECK(r.settling.bound_satisfied == true);
    CHECK(r.average.applicable);
    CHECK(r.report["ok"] == true);
    CHECK(r.report["n"] == 2);
}

TEST_CASE("runs are deterministic") {
    auto cfg = pair_config();
    cfg.graphs = {random_connected_graph(6, 5)};
    cfg.x0 = {3, -1, 0.5, 2, -4, 1};
    cfg.disturbance = DisturbanceModel::sinusoid(0.5);
    auto a = run_experiment(cfg, false);
    auto b = run_experiment(cfg, false);
    CHECK(trace_bytes(a) == trace_bytes(b));
    CHECK(a.report.dump() == b.report.dump());
}

TEST_CASE("outputs are written when requested") {
    const auto dir = std::filesystem::temp_directory_path() / "consensus_lab_runner_test";
    std::filesystem::create_directories(dir);
    auto cfg = pair_config();
    cfg.output.trace = (dir / "trace.csv").string();
    cfg.output.report = (dir / "report.json").string();
    auto r = run_experiment(cfg, true);
    CHECK(r.ok());
    auto back = read_trace_csv(cfg.output.trace);
    CHECK(back.size() == r.trace.size());
    std::ifstream rep(cfg.output.report);
    CHECK(json::parse(rep)["name"] == "pair");
    std::filesystem::remove_all(dir);
}

TEST_CASE("disconnected topology rejected by the design") {
    auto cfg = pair_config();
    cfg.graphs = {WeightedGraph(3, {{0, 1, 1.0}})};
    cfg.x0 = {0, 1, 2};
    try {
        (void)run_experiment(cfg, false);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("connected") != std::string::npos);
    }
}

TEST_CASE("explicit gains without zeta are rejected") {
    auto cfg = pair_config();
    cfg.design.reset();
    cfg.kappa = {1.0, 1.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.zeta = 0.0;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("sweep over k") {
    auto cfg = pair_config();
    cfg.rho = {1.0, 1.0, 0.5, 12.0, 1.0};
    cfg.x0 = {-1.0, 1.0};
    auto rows = sweep(cfg, {{"k", {0.1, 0.5, 1.0}}}, 2);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CAPTURE(i);
        CHECK_FALSE(rows[i].skipped);
        REQUIRE(rows[i].slack);
        CHECK(*rows[i].slack > 0.0);
        CHECK(rows[i].bound_satisfied == true);
        if (i > 0) CHECK(*rows[i - 1].slack <= *rows[i].slack);
    }
    const auto csv = sweep_csv(rows);
    CHECK(csv.find("slack") != std::string::npos);
}

TEST_CASE("single-point sweep matches run_experiment") {
    auto cfg = pair_config();
    auto rows = sweep(cfg, {{"k", {1.0}}}, 1);
    REQUIRE(rows.size() == 1);
    auto direct = run_experiment(cfg, false);
    REQUIRE(rows[0].t_settle);
    CHECK(*rows[0].t_settle == *direct.settling.t_settle);
    CHECK(rows[0].T_c == direct.settling.bound_T_c);
}

TEST_CASE("sweep skips invalid points") {
    auto cfg = pair_config();
    auto rows = sweep(cfg, {{"k", {1.0, 2.5}}}, 1);
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].skipped);
    CHECK(rows[1].skipped);
    CHECK(rows[1].point.at("k") == 2.5);
    CHECK(rows[1].reason.find("k*p < 1") != std::string::npos);
}

TEST_CASE("grid json") {
    auto g = grid_from_json(json::parse(R"({"k": [0.1, 0.5], "T_c": 2})"));
    CHECK(g.at("k") == std::vector<double>{0.1, 0.5});
    CHECK(g.at("T_c") == std::vector<double>{2.0});
    CHECK_THROWS_AS((void)grid_from_json(json::parse(R"({"gain": [1]})")), ConfigError);
}

TEST_CASE("repro case names") {
    for (auto c : {ReproCase::example1, ReproCase::example2, ReproCase::example3, ReproCase::table3})
        CHECK(repro_case_from_string(to_string(c)) == c);
    CHECK_THROWS((void)repro_case_from_string("example9"));
}

TEST_CASE("example 1 reproduction meets its bound") {
    ReproOptions opts;
    opts.h = 1e-5;
    auto rep = reproduce(ReproCase::example1, opts);
    CHECK(rep.all_ok);
    REQUIRE_FALSE(rep.rows.empty());
    for (const auto& row : rep.rows) {
        CAPTURE(row.label);
        CHECK(row.bound_satisfied == true);
    }
    CHECK(rep.table().find("0.095") != std::string::npos);
}
