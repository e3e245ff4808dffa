#include <doctest.h>

#include <sstream>

#include "consensus_lab/config.hpp"
#include "consensus_lab/trace_io.hpp"

using namespace consensus_lab;
using nlohmann::json;

namespace {

json base_config() {
    return json::parse(R"({
        "name": "pair",
        "graphs": [{"n": 2, "edges": [[0, 1, 1.0]]}],
        "protocol": {"variant": "B", "rho": {"alpha": 1, "beta": 1, "p": 0.5, "q": 2, "k": 1}},
        "design": {"theorem": "t5", "T_c": 1.0},
        "x0": [-1.0, 1.0],
        "h": 1e-4,
        "t_end": 1.2
    })");
}

std::string field_of(const json& j) {
    try {
        auto cfg = config_from_json(j);
        cfg.validate();
    } catch (const ConfigError& e) {
        return e.field() + " | " + e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("minimal config parses") {
    auto cfg = config_from_json(base_config());
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.name == "pair");
    CHECK(cfg.variant == ProtocolVariant::B);
    REQUIRE(cfg.design);
    CHECK(cfg.design->theorem == Theorem::T5_predefined_switched_B);
    CHECK(cfg.declared_T_c() == 1.0);
    CHECK(cfg.sim.h == 1e-4);
    CHECK(cfg.graphs.front() == path_graph(2));
}

TEST_CASE("config errors name the field") {
    auto j = base_config();
    j["protocol"]["rho"]["k"] = 2.5;  // k p = 1.25
    auto msg = field_of(j);
    CHECK(msg.rfind("protocol.rho", 0) == 0);
    CHECK(msg.find("k*p < 1") != std::string::npos);

    j = base_config();
    j["x0"] = {1.0, 2.0, 3.0};
    CHECK(field_of(j).rfind("x0", 0) == 0);

    j = base_config();
    j["protocol"].erase("rho");
    CHECK(field_of(j).rfind("protocol.rho", 0) == 0);

    j = base_config();
    j["design"]["theorem"] = "t4";
    CHECK(field_of(j).rfind("design.theorem", 0) == 0);

    j = base_config();
    j["design"]["margin"] = 0.5;
    CHECK(field_of(j).rfind("design.margin", 0) == 0);

    j = base_config();
    j["h"] = -1.0;
    CHECK(field_of(j).rfind("h", 0) == 0);

    j = base_config();
    j["graphs"][0]["edges"] = json::array({json::array({0, 0, 1.0})});
    CHECK(field_of(j).rfind("graphs[0]", 0) == 0);

    j = base_config();
    j["design"].erase("T_c");
    CHECK(field_of(j).rfind("design.T_c", 0) == 0);
}

TEST_CASE("graph json forms") {
    auto g = graph_from_json(json::parse(R"({"generator": {"kind": "cycle", "n": 5}})"), 1);
    CHECK(g == cycle_graph(5));
    auto r1 = graph_from_json(json::parse(R"({"generator": {"kind": "random", "n": 8}})"), 7);
    auto r2 = graph_from_json(json::parse(R"({"generator": {"kind": "random", "n": 8, "seed": 7}})"), 99);
    CHECK(r1 == r2);
    CHECK(r1 == random_connected_graph(8, 7));
    auto c = graph_from_json(json::parse(R"({"generator": {"kind": "random", "n": 8, "lambda2": 2.5}})"), 3);
    CHECK(algebraic_connectivity(c) == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(graph_from_json(graph_to_json(r1), 0) == r1);
    CHECK_THROWS_AS((void)graph_from_json(json::parse(R"({"generator": {"kind": "torus", "n": 4}})"), 1),
                    ConfigError);
}

TEST_CASE("rho round trip") {
    RhoParams r{0.7, 3.0, 0.3, 2.4, 1.1};
    CHECK(rho_from_json(rho_to_json(r)) == r);
}

TEST_CASE("trace csv round trip") {
    SimTrace tr;
    tr.n = 2;
    tr.times = {0.0, 0.1, 0.2};
    tr.states = {1.0, -1.0, 0.5, -0.5, 1.0 / 3.0, -1e-300};
    tr.sigma = {0, 1, 1};
    tr.diameter = {2.0, 1.0, 1.0 / 3.0 + 1e-300};
    tr.controls = {-2.0, 2.0, -1.0, 1.0, 0.1, -0.1};
    std::ostringstream out;
    write_trace_csv(out, tr, true);
    const std::string text = out.str();
    CHECK(text.rfind("t,x_1,x_2,sigma,u_1,u_2,V_diam", 0) == 0);

    std::istringstream in(text);
    auto back = read_trace_csv(in);
    CHECK(back.n == 2);
    CHECK(back.times == tr.times);
    CHECK(back.states == tr.states);
    CHECK(back.sigma == tr.sigma);
    CHECK(back.controls == tr.controls);
    CHECK(back.diameter == tr.diameter);

    std::istringstream bad("t,x_1\n0,abc\n");
    CHECK_THROWS_AS((void)read_trace_csv(bad), std::runtime_error);
}
