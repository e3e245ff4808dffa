#include "consensus_lab/config.hpp"

#include <cmath>
#include <fstream>

namespace consensus_lab {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(join(path, key), "missing required field");
    return *it;
}

double as_double(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
    return v;
}

std::size_t as_index(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw ConfigError(path, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

std::vector<double> as_vector(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_double(j[i], index(path, i)));
    return out;
}

double get_or(const json& j, const std::string& key, double fallback, const std::string& path) {
    auto it = j.find(key);
    return it == j.end() ? fallback : as_double(*it, join(path, key));
}

std::optional<double> get_opt(const json& j, const std::string& key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return as_double(*it, join(path, key));
}

ProtocolVariant variant_from(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected \"A\" or \"B\"");
    const auto s = j.get<std::string>();
    if (s == "A" || s == "a") return ProtocolVariant::A;
    if (s == "B" || s == "b") return ProtocolVariant::B;
    throw ConfigError(path, "unknown protocol variant '" + s + "'");
}

DisturbanceModel disturbance_from(const json& j, const std::string& path) {
    DisturbanceModel d;
    const auto kind = require(j, "kind", path);
    if (!kind.is_string()) throw ConfigError(join(path, "kind"), "expected a string");
    const auto k = kind.get<std::string>();
    auto amplitude = [&](double fallback) -> std::vector<double> {
        auto it = j.find("amplitude");
        if (it == j.end()) return {fallback};
        if (it->is_number()) return {as_double(*it, join(path, "amplitude"))};
        return as_vector(*it, join(path, "amplitude"));
    };
    if (k == "zero") {
        d.kind = DisturbanceKind::zero;
    } else if (k == "sinusoid") {
        d.kind = DisturbanceKind::sinusoid;
        d.amplitude = amplitude(1.0);
        d.frequency = get_or(j, "frequency", 40.0, path);
        d.phase_step = get_or(j, "phase_step", 0.1, path);
    } else if (k == "table") {
        d.kind = DisturbanceKind::table;
        d.table_times = as_vector(require(j, "times", path), join(path, "times"));
        const auto& rows = require(j, "values", path);
        if (!rows.is_array()) throw ConfigError(join(path, "values"), "expected an array of rows");
        for (std::size_t r = 0; r < rows.size(); ++r)
            d.table_values.push_back(as_vector(rows[r], index(join(path, "values"), r)));
        d.amplitude = j.contains("amplitude") ? amplitude(0.0) : std::vector<double>{};
    } else {
        throw ConfigError(join(path, "kind"), "unknown disturbance kind '" + k + "'");
    }
    return d;
}

}  // namespace

WeightedGraph graph_from_json(const json& j, std::uint64_t default_seed, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected a graph object");
    try {
        if (auto gen = j.find("generator"); gen != j.end()) {
            const std::string gpath = join(path, "generator");
            const auto& kind_j = require(*gen, "kind", gpath);
            if (!kind_j.is_string()) throw ConfigError(join(gpath, "kind"), "expected a string");
            const auto kind = kind_j.get<std::string>();
            const std::size_t n = as_index(require(*gen, "n", gpath), join(gpath, "n"));
            const double w = get_or(*gen, "weight", 1.0, gpath);
            WeightedGraph g;
            if (kind == "path") g = path_graph(n, w);
            else if (kind == "cycle") g = cycle_graph(n, w);
            else if (kind == "star") g = star_graph(n, w);
            else if (kind == "complete") g = complete_graph(n, w);
            else if (kind == "random") {
                RandomGraphOptions opts;
                opts.extra_edge_probability = get_or(*gen, "extra_edge_probability", opts.extra_edge_probability, gpath);
                opts.weight_min = get_or(*gen, "weight_min", opts.weight_min, gpath);
                opts.weight_max = get_or(*gen, "weight_max", opts.weight_max, gpath);
                std::uint64_t seed = default_seed;
                if (auto s = gen->find("seed"); s != gen->end()) seed = as_index(*s, join(gpath, "seed"));
                g = random_connected_graph(n, seed, opts);
            } else {
                throw ConfigError(join(gpath, "kind"), "unknown generator '" + kind + "'");
            }
            if (auto target = get_opt(*gen, "lambda2", gpath)) g = calibrate_lambda2(g, *target);
            return g;
        }
        const std::size_t n = as_index(require(j, "n", path), join(path, "n"));
        const auto& edges_j = require(j, "edges", path);
        if (!edges_j.is_array()) throw ConfigError(join(path, "edges"), "expected an array");
        std::vector<Edge> edges;
        for (std::size_t k = 0; k < edges_j.size(); ++k) {
            const auto epath = index(join(path, "edges"), k);
            const auto& e = edges_j[k];
            if (!e.is_array() || (e.size() != 2 && e.size() != 3))
                throw ConfigError(epath, "expected [i, j] or [i, j, weight]");
            edges.push_back({as_index(e[0], epath), as_index(e[1], epath),
                             e.size() == 3 ? as_double(e[2], epath) : 1.0});
        }
        return WeightedGraph(n, std::move(edges));
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(path, ex.what());
    }
}

json graph_to_json(const WeightedGraph& g) {
    json edges = json::array();
    for (const auto& e : g.edges()) edges.push_back({e.i, e.j, e.weight});
    return {{"n", g.vertex_count()}, {"edges", edges}};
}

RhoParams rho_from_json(const json& j, const std::string& path) {
    RhoParams rho;
    rho.alpha = as_double(require(j, "alpha", path), join(path, "alpha"));
    rho.beta = as_double(require(j, "beta", path), join(path, "beta"));
    rho.p = as_double(require(j, "p", path), join(path, "p"));
    rho.q = as_double(require(j, "q", path), join(path, "q"));
    rho.k = as_double(require(j, "k", path), join(path, "k"));
    try {
        rho.validate();
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(path, ex.what());
    }
    return rho;
}

json rho_to_json(const RhoParams& rho) {
    return {{"alpha", rho.alpha}, {"beta", rho.beta}, {"p", rho.p}, {"q", rho.q}, {"k", rho.k}};
}

SimConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
    SimConfig cfg;
    if (auto it = j.find("name"); it != j.end() && it->is_string()) cfg.name = it->get<std::string>();
    if (auto it = j.find("seed"); it != j.end()) cfg.seed = as_index(*it, "seed");

    const auto& graphs = require(j, "graphs", "");
    if (!graphs.is_array() || graphs.empty()) throw ConfigError("graphs", "expected a non-empty array");
    for (std::size_t l = 0; l < graphs.size(); ++l)
        cfg.graphs.push_back(graph_from_json(graphs[l], cfg.seed + l, index("graphs", l)));

    if (auto it = j.find("schedule"); it != j.end()) {
        if (!it->is_array() || it->empty()) throw ConfigError("schedule", "expected a non-empty array");
        cfg.schedule.clear();
        for (std::size_t k = 0; k < it->size(); ++k) {
            const auto& e = (*it)[k];
            const auto epath = index("schedule", k);
            if (!e.is_array() || e.size() != 2) throw ConfigError(epath, "expected [t_start, graph_index]");
            cfg.schedule.push_back({as_double(e[0], epath), as_index(e[1], epath)});
        }
    }
    cfg.dwell_min = get_or(j, "dwell_min", cfg.dwell_min, "");

    const auto& proto = require(j, "protocol", "");
    cfg.variant = variant_from(require(proto, "variant", "protocol"), "protocol.variant");
    cfg.rho = rho_from_json(require(proto, "rho", "protocol"), "protocol.rho");
    if (auto it = proto.find("kappa"); it != proto.end()) {
        if (it->is_number()) {
            const double kv = as_double(*it, "protocol.kappa");
            cfg.kappa.assign(cfg.graphs.front().vertex_count(), kv);
        } else {
            cfg.kappa = as_vector(*it, "protocol.kappa");
        }
    }
    if (auto it = proto.find("kappa_per_graph"); it != proto.end()) {
        if (!it->is_array()) throw ConfigError("protocol.kappa_per_graph", "expected an array");
        const std::size_t n = cfg.graphs.front().vertex_count();
        for (std::size_t l = 0; l < it->size(); ++l) {
            const auto& entry = (*it)[l];
            const auto epath = index("protocol.kappa_per_graph", l);
            cfg.kappa_per_graph.push_back(entry.is_number()
                                              ? std::vector<double>(n, as_double(entry, epath))
                                              : as_vector(entry, epath));
        }
    }
    cfg.zeta = get_opt(proto, "zeta", "protocol");

    if (auto it = j.find("design"); it != j.end()) {
        DesignDirective d;
        const auto& th = require(*it, "theorem", "design");
        if (!th.is_string()) throw ConfigError("design.theorem", "expected \"t3\", \"t4\" or \"t5\"");
        try {
            d.theorem = theorem_from_string(th.get<std::string>());
        } catch (const std::invalid_argument& ex) {
            throw ConfigError("design.theorem", ex.what());
        }
        d.T_c = get_opt(*it, "T_c", "design");
        d.L = get_opt(*it, "L", "design");
        d.margin = get_or(*it, "margin", 1.0, "design");
        if (auto kp = it->find("kappa_per_graph"); kp != it->end())
            d.kappa_per_graph = as_vector(*kp, "design.kappa_per_graph");
        cfg.design = d;
    }

    if (auto it = j.find("disturbance"); it != j.end()) cfg.disturbance = disturbance_from(*it, "disturbance");
    cfg.x0 = as_vector(require(j, "x0", ""), "x0");
    cfg.sim.h = get_or(j, "h", cfg.sim.h, "");
    cfg.sim.t_end = get_or(j, "t_end", cfg.sim.t_end, "");
    if (auto it = j.find("record_every"); it != j.end()) cfg.sim.record_every = as_index(*it, "record_every");
    if (auto it = j.find("max_substeps"); it != j.end()) cfg.sim.max_substeps = as_index(*it, "max_substeps");
    cfg.settle_tol = get_or(j, "settle_tol", cfg.settle_tol, "");
    cfg.T_c = get_opt(j, "T_c", "");

    if (auto it = j.find("output"); it != j.end()) {
        if (auto t = it->find("trace"); t != it->end()) cfg.output.trace = t->get<std::string>();
        if (auto r = it->find("report"); r != it->end()) cfg.output.report = r->get<std::string>();
        if (auto c = it->find("controls"); c != it->end()) cfg.output.controls = c->get<bool>();
    }
    cfg.validate();
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& ex) {
        throw ConfigError("config", std::string("JSON parse error: ") + ex.what());
    }
    return config_from_json(j);
}

SwitchedNetwork SimConfig::network() const {
    SwitchedNetwork net;
    net.graphs = graphs;
    net.schedule = schedule;
    net.dwell_min = dwell_min;
    return net;
}

std::optional<double> SimConfig::declared_T_c() const {
    if (T_c) return T_c;
    if (design && design->theorem != Theorem::T3_fixed_time_A) return design->T_c;
    return std::nullopt;
}

void SimConfig::validate() const {
    if (graphs.empty()) throw ConfigError("graphs", "at least one graph is required");
    const std::size_t n = graphs.front().vertex_count();
    for (std::size_t l = 0; l < graphs.size(); ++l)
        if (graphs[l].vertex_count() != n)
            throw ConfigError(index("graphs", l), "all graphs must share the vertex count");
    try {
        network().validate();
    } catch (const std::invalid_argument& ex) {
        throw ConfigError("schedule", ex.what());
    }
    if (x0.size() != n)
        throw ConfigError("x0", "has " + std::to_string(x0.size()) + " entries, graphs have " +
                                    std::to_string(n) + " vertices");
    if (kappa.empty() && kappa_per_graph.empty() && !design)
        throw ConfigError("protocol", "either explicit gains (kappa) or a design directive is required");
    if (!kappa.empty() && kappa.size() != n)
        throw ConfigError("protocol.kappa", "needs one gain per agent");
    if (!kappa_per_graph.empty() && kappa_per_graph.size() != graphs.size())
        throw ConfigError("protocol.kappa_per_graph", "needs one entry per graph");
    for (std::size_t l = 0; l < kappa_per_graph.size(); ++l)
        if (kappa_per_graph[l].size() != n)
            throw ConfigError(index("protocol.kappa_per_graph", l), "needs one gain per agent");
    if ((!kappa.empty() || !kappa_per_graph.empty()) && !design && !zeta)
        throw ConfigError("protocol.zeta", "required with explicit gains");
    if (zeta && *zeta < 0.0) throw ConfigError("protocol.zeta", "must be >= 0");
    if (design) {
        const bool wants_b = design->theorem == Theorem::T5_predefined_switched_B;
        if (wants_b != (variant == ProtocolVariant::B))
            throw ConfigError("design.theorem", std::string("theorem ") + to_string(design->theorem) +
                                                    " does not apply to protocol variant " +
                                                    to_string(variant));
        if (design->theorem == Theorem::T4_predefined_static_A && graphs.size() != 1)
            throw ConfigError("design.theorem", "t4 (static topology) requires exactly one graph");
        if (design->theorem != Theorem::T3_fixed_time_A && !design->T_c && !T_c)
            throw ConfigError("design.T_c", "required for predefined-time designs");
        if (design->margin < 1.0) throw ConfigError("design.margin", "must be >= 1");
        if (!design->kappa_per_graph.empty() && design->kappa_per_graph.size() != graphs.size())
            throw ConfigError("design.kappa_per_graph", "needs one gain per graph");
    }
    try {
        disturbance.validate(n);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError("disturbance", ex.what());
    }
    if (!(sim.h > 0.0)) throw ConfigError("h", "must be positive");
    if (!(sim.t_end > 0.0)) throw ConfigError("t_end", "must be positive");
    if (sim.record_every == 0) throw ConfigError("record_every", "must be >= 1");
    if (!(settle_tol > 0.0)) throw ConfigError("settle_tol", "must be positive");
    if (T_c && !(*T_c > 0.0)) throw ConfigError("T_c", "must be positive");
    for (const auto& e : schedule)
        if (e.t_start >= sim.t_end)
            throw ConfigError("schedule", "switch at t = " + std::to_string(e.t_start) + " is not before t_end");
}

json certificate_to_json(const GainCertificate& cert) {
    json slack = json::array();
    for (const auto& e : cert.slack)
        slack.push_back({{"inequality", e.name}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"slack", e.slack}, {"pass", e.pass}});
    json out = {
        {"theorem", to_string(cert.theorem)},
        {"variant", to_string(cert.params.variant)},
        {"rho", rho_to_json(cert.params.rho)},
        {"kappa", cert.params.kappa},
        {"zeta", cert.params.zeta},
        {"L", cert.L},
        {"gamma", cert.gamma},
        {"lambda2", cert.lambda2},
        {"lambda2_star", cert.lambda2_star},
        {"edges_min", cert.edges_min},
        {"slack", slack},
        {"satisfied", cert.satisfied()},
        {"notes", cert.notes},
    };
    out["T_c"] = cert.T_c ? json(*cert.T_c) : json(nullptr);
    if (!cert.kappa_per_graph.empty()) out["kappa_per_graph"] = cert.kappa_per_graph;
    return out;
}

json certificate_report_to_json(const CertificateReport& report) {
    json entries = json::array();
    for (const auto& e : report.entries)
        entries.push_back({{"inequality", e.name}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"slack", e.slack}, {"pass", e.pass}});
    return {{"entries", entries}, {"notes", report.notes}, {"all_pass", report.all_pass}};
}

json settling_to_json(const SettlingReport& r) {
    json out = {{"settled", r.settled}, {"tol_abs", r.tol_abs},
                {"post_settle_max_diameter", r.post_settle_max_diameter}};
    out["t_settle"] = r.t_settle ? json(*r.t_settle) : json(nullptr);
    out["bound_T_c"] = r.bound_T_c ? json(*r.bound_T_c) : json(nullptr);
    out["bound_satisfied"] = r.bound_satisfied ? json(*r.bound_satisfied) : json(nullptr);
    return out;
}

json average_to_json(const AverageConsensusReport& r) {
    json out = {{"applicable", r.applicable}, {"initial_mean", r.initial_mean},
                {"max_mean_drift", r.max_mean_drift}, {"final_diameter", r.final_diameter}};
    out["consensus_value"] = r.consensus_value ? json(*r.consensus_value) : json(nullptr);
    out["consensus_error"] = r.consensus_error ? json(*r.consensus_error) : json(nullptr);
    return out;
}

}  // namespace consensus_lab
