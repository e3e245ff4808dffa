#include "consensus_lab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "consensus_lab/trace_io.hpp"

namespace consensus_lab {

using nlohmann::json;

namespace {

double effective_L(const SimConfig& cfg) {
    if (cfg.design && cfg.design->L) return *cfg.design->L;
    return disturbance_norm_bound(disturbance_bounds(cfg.disturbance, cfg.x0.size()));
}

std::optional<double> design_T_c(const SimConfig& cfg) {
    if (cfg.design && cfg.design->T_c) return cfg.design->T_c;
    return cfg.T_c;
}

// Certificate for gains given by the user rather than designed.
GainCertificate certify_explicit(const SimConfig& cfg, const ProtocolParams& base,
                                 const std::vector<std::vector<double>>& presets, double L) {
    GainCertificate cert;
    cert.theorem = cfg.design->theorem;
    cert.params = base;
    cert.kappa_per_graph = presets;
    if (cert.theorem != Theorem::T3_fixed_time_A) cert.T_c = design_T_c(cfg);
    cert.L = L;
    cert.gamma = settling_bound(base.rho);
    cert.edges_min = std::numeric_limits<std::size_t>::max();
    for (const auto& g : cfg.graphs) {
        cert.lambda2.push_back(algebraic_connectivity(g));
        cert.edges_min = std::min(cert.edges_min, g.edge_count());
    }
    cert.lambda2_star = *std::min_element(cert.lambda2.begin(), cert.lambda2.end());
    auto report = verify_certificate(cert, cfg.graphs);
    cert.slack = std::move(report.entries);
    cert.notes = std::move(report.notes);
    cert.notes.emplace_back("explicit gains checked, not designed");
    return cert;
}

}  // namespace

ResolvedGains resolve_gains(const SimConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.x0.size();
    const std::size_t m = cfg.graphs.size();
    ResolvedGains out;
    try {
        const double L = effective_L(cfg);
        if (!cfg.kappa.empty() || !cfg.kappa_per_graph.empty()) {
            ProtocolParams base;
            base.rho = cfg.rho;
            base.variant = cfg.variant;
            if (!cfg.kappa.empty()) {
                base.kappa = cfg.kappa;
            } else {
                base.kappa.assign(n, std::numeric_limits<double>::infinity());
                for (const auto& row : cfg.kappa_per_graph)
                    for (std::size_t i = 0; i < n; ++i) base.kappa[i] = std::min(base.kappa[i], row[i]);
            }
            if (cfg.zeta) {
                base.zeta = *cfg.zeta;
            } else {
                double scale = 1.0;
                if (cfg.variant == ProtocolVariant::B) {
                    double l2 = std::numeric_limits<double>::infinity();
                    for (const auto& g : cfg.graphs) l2 = std::min(l2, algebraic_connectivity(g));
                    scale = std::sqrt(l2);
                }
                base.zeta = L / (base.min_kappa() * scale);
            }
            base.validate(n);
            out.per_graph.assign(m, base);
            for (std::size_t l = 0; l < cfg.kappa_per_graph.size(); ++l) out.per_graph[l].kappa = cfg.kappa_per_graph[l];
            if (cfg.design) out.certificate = certify_explicit(cfg, base, cfg.kappa_per_graph, L);
            return out;
        }
        const auto& d = *cfg.design;
        switch (d.theorem) {
            case Theorem::T4_predefined_static_A:
                out.certificate = design_T4_static_A(cfg.graphs.front(), cfg.rho, *design_T_c(cfg), L, d.margin);
                break;
            case Theorem::T3_fixed_time_A: {
                auto presets = d.kappa_per_graph.empty()
                                   ? default_switched_A_gains(cfg.graphs, cfg.rho, design_T_c(cfg).value_or(1.0))
                                   : d.kappa_per_graph;
                for (double& kv : presets) kv *= d.margin;
                out.certificate = design_T3_switched_A(cfg.graphs, cfg.rho, L, presets);
                break;
            }
            case Theorem::T5_predefined_switched_B:
                out.certificate = design_T5_switched_B(cfg.graphs, cfg.rho, *design_T_c(cfg), L, d.margin);
                break;
        }
        out.per_graph = gain_schedule(*out.certificate, m);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(cfg.design ? "design" : "protocol", ex.what());
    }
    return out;
}

bool ExperimentResult::ok() const {
    if (diverged) return false;
    if (settling.bound_satisfied) return *settling.bound_satisfied;
    return true;
}

ExperimentResult run_experiment(const SimConfig& cfg, bool write_outputs) {
    auto gains = resolve_gains(cfg);
    const auto net = cfg.network();
    const auto T_c = cfg.declared_T_c();

    ExperimentResult res;
    res.certificate = gains.certificate;
    SimOptions opts = cfg.sim;
    opts.record_controls = opts.record_controls || cfg.output.controls;
    try {
        res.trace = simulate(net, cfg.x0, gains.per_graph, cfg.disturbance, opts);
        res.settling = detect_settling(res.trace, cfg.settle_tol, T_c);
    } catch (const SimulationDiverged& ex) {
        res.diverged = true;
        res.failure = ex.what();
        res.settling.tol_abs = cfg.settle_tol;
        res.settling.bound_T_c = T_c;
        if (T_c) res.settling.bound_satisfied = false;
    }
    const bool undisturbed = cfg.disturbance.kind == DisturbanceKind::zero;
    if (!res.diverged) {
        // the mean is conserved when every topology uses uniform gains
        const ProtocolParams* probe = &gains.per_graph.front();
        for (const auto& p : gains.per_graph)
            if (p.min_kappa() != p.max_kappa()) probe = &p;
        res.average = average_consensus_check(res.trace, *probe, undisturbed, cfg.settle_tol);
    }

    json gains_j = json::array();
    for (const auto& p : gains.per_graph) gains_j.push_back({{"kappa", p.kappa}, {"zeta", p.zeta}});
    res.report = {
        {"name", cfg.name},
        {"seed", cfg.seed},
        {"n", cfg.x0.size()},
        {"variant", to_string(cfg.variant)},
        {"rho", rho_to_json(cfg.rho)},
        {"gamma", settling_bound(cfg.rho)},
        {"gains_per_graph", gains_j},
        {"h", cfg.sim.h},
        {"t_end", cfg.sim.t_end},
        {"steps", res.trace.steps},
        {"guard_substeps", res.trace.substeps},
        {"settling", settling_to_json(res.settling)},
        {"average_consensus", average_to_json(res.average)},
        {"diverged", res.diverged},
        {"ok", res.ok()},
    };
    if (res.diverged) res.report["failure"] = res.failure;
    res.report["certificate"] = res.certificate ? certificate_to_json(*res.certificate) : json(nullptr);

    if (write_outputs) {
        if (!cfg.output.trace.empty() && !res.diverged)
            write_trace_csv(cfg.output.trace, res.trace, cfg.output.controls);
        if (!cfg.output.report.empty()) {
            std::ofstream out(cfg.output.report);
            if (!out) throw std::runtime_error("cannot write '" + cfg.output.report + "'");
            out << res.report.dump(2) << '\n';
        }
    }
    return res;
}

// ---------------------------------------------------------------- reproduce

const char* to_string(ReproCase c) noexcept {
    switch (c) {
        case ReproCase::example1: return "example1";
        case ReproCase::example2: return "example2";
        case ReproCase::example3: return "example3";
        case ReproCase::table3: return "table3";
    }
    return "?";
}

ReproCase repro_case_from_string(const std::string& s) {
    for (auto c : {ReproCase::example1, ReproCase::example2, ReproCase::example3, ReproCase::table3})
        if (s == to_string(c)) return c;
    throw std::invalid_argument("unknown reproduction case '" + s + "' (example1|example2|example3|table3)");
}

std::vector<double> example1_x0() {
    return {134.51, 40.72, 214.15, 40.04, -241.50, -189.57, 181.35, -7.8517, 172.42, -145.29};
}

std::vector<double> example2_x0() {
    return {-210.02, 117.66, 161.32, -78.30, -181.93, 82.97, 165.22, 86.81, -180.27, -60.58};
}

std::vector<double> example3_x0() {
    return {72.31, 167.49, -226.30, 45.68, 246.20, -121.78, -196.90, -128.59, -88.57, 29.05};
}

RhoParams example_rho() { return {1.0, 2.0, 1.5, 3.0, 0.5}; }

std::vector<RhoParams> table3_rhos() {
    // first row printed with q = 0.9, read as q = 1.9 (kq > 1 is required)
    return {{1.0, 2.0, 0.1, 1.9, 1.0}, {1.0, 2.0, 0.1, 1.9, 0.75}, {1.0, 2.0, 1.5, 12.0, 0.1}};
}

std::vector<double> switched_lambda2_targets() { return {0.16548, 0.73648, 0.15776, 0.57104}; }

std::vector<WeightedGraph> calibrated_collection(std::span<const double> lambda2, std::uint64_t seed) {
    std::vector<WeightedGraph> out;
    for (std::size_t l = 0; l < lambda2.size(); ++l)
        out.push_back(calibrate_lambda2(random_connected_graph(10, seed + 101 * l), lambda2[l]));
    return out;
}

namespace {

SimConfig base_config(const ReproOptions& o, double h, std::vector<WeightedGraph> graphs, std::vector<double> x0) {
    SimConfig cfg;
    cfg.seed = o.seed;
    cfg.graphs = std::move(graphs);
    cfg.x0 = std::move(x0);
    cfg.rho = example_rho();
    cfg.disturbance = DisturbanceModel::sinusoid(1.0, 40.0, 0.1);
    cfg.sim.h = h;
    cfg.sim.t_end = 1.2;
    cfg.sim.record_every = o.record_every;
    cfg.dwell_min = 0.05;
    return cfg;
}

void use_switching(SimConfig& cfg, std::uint64_t seed) {
    cfg.schedule = random_schedule(cfg.graphs.size(), cfg.sim.t_end, 0.1, 1.5, seed);
}

ReproRow row_from(const std::string& label, const std::string& protocol, const ExperimentResult& r,
                  std::optional<double> T_c, std::string reference) {
    ReproRow row;
    row.label = label;
    row.protocol = protocol;
    row.t_settle = r.settling.t_settle;
    row.T_c = T_c;
    if (T_c) row.bound_satisfied = r.settling.bound_satisfied.value_or(false);
    if (r.certificate) row.certificate_pass = r.certificate->satisfied();
    row.reference_value = std::move(reference);
    if (r.diverged) row.note = r.failure;
    return row;
}

bool row_ok(const ReproRow& row) {
    if (!row.t_settle) return false;
    if (row.bound_satisfied && !*row.bound_satisfied) return false;
    return true;
}

json graphs_summary(const std::vector<WeightedGraph>& graphs) {
    json out = json::array();
    for (const auto& g : graphs)
        out.push_back({{"lambda2", algebraic_connectivity(g)}, {"edges", g.edge_count()}, {"graph", graph_to_json(g)}});
    return out;
}

}  // namespace

std::string ReproReport::table() const {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-34s %-4s %12s %8s %8s %6s  %s\n", "case", "prot", "t_settle[s]", "T_c[s]",
                  "bound", "cert", "reference (topology-dependent, not directly comparable)");
    out << buf;
    for (const auto& r : rows) {
        char ts_buf[32] = "none";
        if (r.t_settle) std::snprintf(ts_buf, sizeof ts_buf, "%.5f", *r.t_settle);
        const std::string ts = ts_buf;
        const std::string tc = r.T_c ? format_double(*r.T_c) : "-";
        const char* bound = r.bound_satisfied ? (*r.bound_satisfied ? "ok" : "MISSED") : "-";
        const char* cert = r.certificate_pass ? (*r.certificate_pass ? "pass" : "fail") : "-";
        std::snprintf(buf, sizeof buf, "%-34s %-4s %12s %8s %8s %6s  %s", r.label.c_str(), r.protocol.c_str(),
                      ts.c_str(), tc.c_str(), bound, cert, r.reference_value.c_str());
        out << buf;
        if (!r.note.empty()) out << "  [" << r.note << "]";
        out << '\n';
    }
    out << (all_ok ? "all rows settled within their bounds\n" : "some rows FAILED\n");
    return out.str();
}

ReproReport reproduce(ReproCase which, const ReproOptions& o) {
    ReproReport rep;
    rep.which = which;
    const double h = o.h;
    rep.details = {{"case", to_string(which)}, {"seed", o.seed}, {"h", h}};
    const double T_c = 1.0;
    const double L = std::sqrt(10.0);

    if (which == ReproCase::example1) {
        const std::vector<double> target{0.27935};
        auto cfg = base_config(o, h, calibrated_collection(target, o.seed), example1_x0());
        cfg.variant = ProtocolVariant::A;
        cfg.kappa.assign(10, 178.88);
        cfg.zeta = 0.0177;
        cfg.T_c = T_c;
        cfg.design = DesignDirective{Theorem::T4_predefined_static_A, T_c, L, 1.0, {}};
        auto r = run_experiment(cfg, false);
        rep.rows.push_back(row_from("example1 published gains", "A", r, T_c, "0.095 s"));
        rep.details["graphs"] = graphs_summary(cfg.graphs);
        rep.details["certificate"] = certificate_to_json(*r.certificate);
    } else if (which == ReproCase::example2) {
        auto cfg = base_config(o, h, calibrated_collection(switched_lambda2_targets(), o.seed), example2_x0());
        use_switching(cfg, o.seed);
        cfg.variant = ProtocolVariant::A;
        const std::vector<double> published{301.9585, 67.8472, 316.7348, 87.5037};
        cfg.design = DesignDirective{Theorem::T3_fixed_time_A, std::nullopt, L, 1.0, published};
        auto r = run_experiment(cfg, false);
        auto row = row_from("example2 published gains", "A", r, std::nullopt, "-");
        row.note = "fixed-time, no T_c; zeta = " + format_double(r.certificate->params.zeta) +
                   " (published 0.0466)";
        rep.rows.push_back(row);
        rep.details["graphs"] = graphs_summary(cfg.graphs);
        rep.details["schedule"] = json::array();
        for (const auto& e : cfg.schedule) rep.details["schedule"].push_back({e.t_start, e.graph});
        rep.details["certificate"] = certificate_to_json(*r.certificate);
    } else if (which == ReproCase::example3) {
        auto graphs = calibrated_collection(switched_lambda2_targets(), o.seed);
        auto cfg = base_config(o, h, graphs, example3_x0());
        use_switching(cfg, o.seed);
        cfg.variant = ProtocolVariant::B;
        cfg.T_c = T_c;

        auto published = cfg;
        for (double kv : {241.5668, 54.2777, 253.3879, 70.0029}) published.kappa_per_graph.emplace_back(10, kv);
        published.zeta = 0.3693;
        published.design = DesignDirective{Theorem::T5_predefined_switched_B, T_c, L, 1.0, {}};
        auto rp = run_experiment(published, false);
        auto row = row_from("example3 published gains", "B", rp, T_c, "-");
        row.note = rp.certificate->satisfied()
                       ? "published gains certified on this topology"
                       : "published gains fail the certificate here; they match an edge count of 8, "
                         "below the 9 a connected 10-node graph needs";
        rep.rows.push_back(row);

        auto designed = cfg;
        designed.design = DesignDirective{Theorem::T5_predefined_switched_B, T_c, L, 1.0, {}};
        auto rd = run_experiment(designed, false);
        rep.rows.push_back(row_from("example3 designed gains", "B", rd, T_c, "-"));

        auto calm = designed;
        calm.disturbance = DisturbanceModel::none();
        auto rc = run_experiment(calm, false);
        auto crow = row_from("example3 undisturbed", "B", rc, T_c, "-");
        const auto x0 = example3_x0();
        double mean0 = 0.0;
        for (double v : x0) mean0 += v;
        mean0 /= static_cast<double>(x0.size());
        const bool avg_ok = rc.average.consensus_error && *rc.average.consensus_error <= 1e-6 &&
                            rc.average.max_mean_drift <= 1e-6;
        crow.note = "mean(x0) = " + format_double(mean0) + ", |x* - mean(x0)| = " +
                    (rc.average.consensus_error ? format_double(*rc.average.consensus_error) : "n/a") +
                    (avg_ok ? " (average consensus)" : " (AVERAGE CONSENSUS FAILED)");
        rep.rows.push_back(crow);
        rep.all_ok = rep.all_ok && avg_ok;
        rep.details["graphs"] = graphs_summary(graphs);
        rep.details["certificate_published"] = certificate_to_json(*rp.certificate);
        rep.details["certificate_designed"] = certificate_to_json(*rd.certificate);
        rep.details["average_consensus"] = average_to_json(rc.average);
    } else {
        const auto graphs = calibrated_collection(switched_lambda2_targets(), o.seed);
        const char* reference_a[] = {"0.138 s", "0.185 s", "0.258 s"};
        const char* reference_b[] = {"0.105 s", "0.127 s", "0.212 s"};
        const auto rhos = table3_rhos();
        json slack = json::array();
        for (std::size_t r = 0; r < rhos.size(); ++r) {
            char label[96];
            std::snprintf(label, sizeof label, "p=%g q=%g k=%g", rhos[r].p, rhos[r].q, rhos[r].k);

            auto a = base_config(o, h, graphs, example2_x0());
            use_switching(a, o.seed);
            a.rho = rhos[r];
            a.variant = ProtocolVariant::A;
            a.T_c = T_c;
            a.design = DesignDirective{Theorem::T3_fixed_time_A, T_c, L, 1.0, {}};
            auto ra = run_experiment(a, false);
            rep.rows.push_back(row_from(label, "A", ra, T_c, reference_a[r]));

            auto b = base_config(o, h, graphs, example3_x0());
            use_switching(b, o.seed);
            b.rho = rhos[r];
            b.variant = ProtocolVariant::B;
            b.design = DesignDirective{Theorem::T5_predefined_switched_B, T_c, L, 1.0, {}};
            auto rb = run_experiment(b, false);
            rep.rows.push_back(row_from(label, "B", rb, T_c, reference_b[r]));

            json s = {{"row", label}};
            s["slack_A"] = ra.settling.t_settle ? json(T_c - *ra.settling.t_settle) : json(nullptr);
            s["slack_B"] = rb.settling.t_settle ? json(T_c - *rb.settling.t_settle) : json(nullptr);
            slack.push_back(s);
        }
        rep.details["slack"] = slack;
        rep.details["graphs"] = graphs_summary(graphs);
    }
    for (const auto& row : rep.rows) rep.all_ok = rep.all_ok && row_ok(row);
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json j = {{"label", r.label}, {"protocol", r.protocol}, {"reference", r.reference_value}, {"note", r.note}};
        j["t_settle"] = r.t_settle ? json(*r.t_settle) : json(nullptr);
        j["T_c"] = r.T_c ? json(*r.T_c) : json(nullptr);
        j["bound_satisfied"] = r.bound_satisfied ? json(*r.bound_satisfied) : json(nullptr);
        j["certificate_pass"] = r.certificate_pass ? json(*r.certificate_pass) : json(nullptr);
        rows.push_back(j);
    }
    rep.details["rows"] = rows;
    rep.details["all_ok"] = rep.all_ok;
    return rep;
}

// -------------------------------------------------------------------- sweep

std::size_t worker_count() {
    if (const char* env = std::getenv("CONSENSUS_LAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::map<std::string, std::vector<double>> grid_from_json(const json& j) {
    static const char* keys[] = {"alpha", "beta", "p", "q", "k", "T_c", "margin", "L"};
    if (!j.is_object() || j.empty()) throw ConfigError("grid", "expected a non-empty object");
    std::map<std::string, std::vector<double>> grid;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(std::begin(keys), std::end(keys), it.key()) == std::end(keys))
            throw ConfigError("grid." + it.key(), "unknown sweep parameter");
        std::vector<double> values;
        if (it->is_number()) values.push_back(it->get<double>());
        else if (it->is_array() && !it->empty())
            for (const auto& v : *it) {
                if (!v.is_number()) throw ConfigError("grid." + it.key(), "expected numbers");
                values.push_back(v.get<double>());
            }
        else throw ConfigError("grid." + it.key(), "expected a number or non-empty array");
        grid[it.key()] = values;
    }
    return grid;
}

namespace {

SimConfig apply_point(const SimConfig& templ, const std::map<std::string, double>& point) {
    SimConfig cfg = templ;
    for (const auto& [key, v] : point) {
        if (key == "alpha") cfg.rho.alpha = v;
        else if (key == "beta") cfg.rho.beta = v;
        else if (key == "p") cfg.rho.p = v;
        else if (key == "q") cfg.rho.q = v;
        else if (key == "k") cfg.rho.k = v;
        else if (key == "T_c") {
            if (cfg.design) cfg.design->T_c = v;
            if (cfg.T_c || !cfg.design) cfg.T_c = v;
        } else if (key == "margin") {
            if (!cfg.design) throw ConfigError("grid.margin", "needs a design directive in the template");
            cfg.design->margin = v;
        } else if (key == "L") {
            if (!cfg.design) throw ConfigError("grid.L", "needs a design directive in the template");
            cfg.design->L = v;
        }
    }
    try {
        cfg.rho.validate();
    } catch (const std::invalid_argument& ex) {
        throw ConfigError("rho", ex.what());
    }
    cfg.output = {};
    return cfg;
}

}  // namespace

std::vector<SweepRow> sweep(const SimConfig& templ, const std::map<std::string, std::vector<double>>& grid,
                            std::size_t threads) {
    if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
    std::vector<std::map<std::string, double>> points{{}};
    for (const auto& [key, values] : grid) {
        if (values.empty()) throw std::invalid_argument("sweep: no values for " + key);
        std::vector<std::map<std::string, double>> next;
        for (const auto& p : points)
            for (double v : values) {
                auto q = p;
                q[key] = v;
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }

    std::vector<SweepRow> rows(points.size());
    auto work = [&](std::size_t idx) {
        SweepRow& row = rows[idx];
        row.point = points[idx];
        try {
            const auto cfg = apply_point(templ, points[idx]);
            const auto r = run_experiment(cfg, false);
            row.T_c = cfg.declared_T_c();
            row.t_settle = r.settling.t_settle;
            row.bound_satisfied = r.settling.bound_satisfied;
            if (row.T_c && row.t_settle) row.slack = *row.T_c - *row.t_settle;
            if (r.diverged) {
                row.skipped = true;
                row.reason = r.failure;
            }
        } catch (const std::exception& ex) {
            row.skipped = true;
            row.reason = ex.what();
        }
    };
    if (threads == 0) threads = worker_count();
    threads = std::min(threads, points.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < points.size(); i = next++) work(i);
            });
        for (auto& th : pool) th.join();
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.skipped != b.skipped) return !a.skipped;
        const double sa = a.slack.value_or(std::numeric_limits<double>::infinity());
        const double sb = b.slack.value_or(std::numeric_limits<double>::infinity());
        return sa < sb;
    });
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::vector<std::string> keys;
    for (const auto& r : rows)
        for (const auto& [k, v] : r.point)
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    std::ostringstream out;
    for (const auto& k : keys) out << k << ',';
    out << "t_settle,bound_T_c,slack,bound_satisfied,status\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto& r : rows) {
        for (const auto& k : keys) {
            auto it = r.point.find(k);
            out << (it == r.point.end() ? std::string() : format_double(it->second)) << ',';
        }
        out << opt(r.t_settle) << ',' << opt(r.T_c) << ',' << opt(r.slack) << ','
            << (r.bound_satisfied ? (*r.bound_satisfied ? "true" : "false") : "") << ',';
        if (r.skipped) {
            std::string reason = r.reason;
            std::replace(reason.begin(), reason.end(), '"', '\'');
            out << "\"skipped: " << reason << '"';
        } else {
            out << "ok";
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace consensus_lab
