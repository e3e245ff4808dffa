#include "consensus_lab/gain_design.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace consensus_lab {

const char* to_string(Theorem t) noexcept {
    switch (t) {
        case Theorem::T3_fixed_time_A: return "t3";
        case Theorem::T4_predefined_static_A: return "t4";
        case Theorem::T5_predefined_switched_B: return "t5";
    }
    return "?";
}

Theorem theorem_from_string(const std::string& s) {
    std::string lower;
    for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "t3") return Theorem::T3_fixed_time_A;
    if (lower == "t4") return Theorem::T4_predefined_static_A;
    if (lower == "t5") return Theorem::T5_predefined_switched_B;
    throw std::invalid_argument("unknown theorem '" + s + "' (expected t3, t4 or t5)");
}

bool GainCertificate::satisfied() const noexcept {
    return !slack.empty() &&
           std::all_of(slack.begin(), slack.end(), [](const SlackEntry& e) { return e.pass; });
}

double static_gain_floor(std::size_t n, double gamma, double lambda2, double T_c) {
    return static_cast<double>(n) * gamma / (lambda2 * T_c);
}

double switched_gain_floor(std::size_t edges_min, double gamma, double lambda2_star, double T_c) {
    return static_cast<double>(edges_min) * gamma / (lambda2_star * T_c);
}

double disturbance_norm_bound(std::span<const double> per_agent) {
    double s = 0.0;
    for (double l : per_agent) {
        if (l < 0.0) throw std::invalid_argument("disturbance bounds must be nonnegative");
        s += l * l;
    }
    return std::sqrt(s);
}

namespace {

SlackEntry entry(std::string name, double lhs, double rhs) {
    return {std::move(name), lhs, rhs, lhs - rhs, lhs >= rhs};
}

void require_common_size(std::span<const WeightedGraph> graphs) {
    if (graphs.empty()) throw std::invalid_argument("gain design: empty topology collection");
    for (const auto& g : graphs)
        if (g.vertex_count() != graphs.front().vertex_count())
            throw std::invalid_argument("gain design: topologies differ in vertex count");
}

void require_connected(std::span<const WeightedGraph> graphs, const char* theorem) {
    for (std::size_t l = 0; l < graphs.size(); ++l)
        if (!is_connected(graphs[l]))
            throw std::invalid_argument(std::string(theorem) + " requires every topology to be connected; graph " +
                                        std::to_string(l) + " is not");
}

// Smallest zeta with kappa * zeta * scale >= L in floating point.
double offset_for(double L, double kappa, double scale) {
    if (L <= 0.0) return 0.0;
    double zeta = L / (kappa * scale);
    while (kappa * zeta * scale < L) zeta = std::nextafter(zeta, std::numeric_limits<double>::infinity());
    return zeta;
}

void check_inputs(const RhoParams& rho, double T_c, double L, double margin) {
    rho.validate();
    if (!(T_c > 0.0)) throw std::invalid_argument("gain design: T_c must be positive");
    if (!(L >= 0.0)) throw std::invalid_argument("gain design: L must be nonnegative");
    if (!(margin >= 1.0)) throw std::invalid_argument("gain design: margin must be >= 1");
}

}  // namespace

GainCertificate design_T4_static_A(const WeightedGraph& g, const RhoParams& rho, double T_c,
                                   double L, double margin) {
    check_inputs(rho, T_c, L, margin);
    const WeightedGraph one[] = {g};
    require_connected(one, "static predefined-time design");

    const double gamma = settling_bound(rho);
    const double lambda2 = algebraic_connectivity(g);
    const double kappa = margin * static_gain_floor(g.vertex_count(), gamma, lambda2, T_c);

    GainCertificate cert;
    cert.theorem = Theorem::T4_predefined_static_A;
    cert.params.rho = rho;
    cert.params.variant = ProtocolVariant::A;
    cert.params.kappa.assign(g.vertex_count(), kappa);
    cert.params.zeta = offset_for(L, kappa, 1.0);
    cert.T_c = T_c;
    cert.L = L;
    auto report = verify_certificate(cert, one);
    cert.slack = std::move(report.entries);
    cert.notes = std::move(report.notes);
    cert.gamma = gamma;
    cert.lambda2 = {lambda2};
    cert.lambda2_star = lambda2;
    cert.edges_min = g.edge_count();
    return cert;
}

GainCertificate design_T3_switched_A(std::span<const WeightedGraph> graphs, const RhoParams& rho,
                                     double L, std::span<const double> kappa_per_graph) {
    rho.validate();
    require_common_size(graphs);
    require_connected(graphs, "switched fixed-time design");
    if (!(L >= 0.0)) throw std::invalid_argument("gain design: L must be nonnegative");
    if (kappa_per_graph.size() != graphs.size())
        throw std::invalid_argument("switched fixed-time design: need one gain per topology");
    for (double kv : kappa_per_graph)
        if (!(kv > 0.0)) throw std::invalid_argument("switched fixed-time design: gains must be positive");

    const std::size_t n = graphs.front().vertex_count();
    const double kappa_min = *std::min_element(kappa_per_graph.begin(), kappa_per_graph.end());

    GainCertificate cert;
    cert.theorem = Theorem::T3_fixed_time_A;
    cert.params.rho = rho;
    cert.params.variant = ProtocolVariant::A;
    cert.params.kappa.assign(n, kappa_min);
    for (double kv : kappa_per_graph) cert.kappa_per_graph.emplace_back(n, kv);
    cert.params.zeta = offset_for(L, kappa_min, 1.0);
    cert.L = L;
    auto report = verify_certificate(cert, graphs);
    cert.slack = std::move(report.entries);
    cert.notes = std::move(report.notes);
    cert.gamma = settling_bound(rho);
    for (const auto& g : graphs) cert.lambda2.push_back(algebraic_connectivity(g));
    cert.lambda2_star = *std::min_element(cert.lambda2.begin(), cert.lambda2.end());
    cert.edges_min = graphs.front().edge_count();
    for (const auto& g : graphs) cert.edges_min = std::min(cert.edges_min, g.edge_count());
    return cert;
}

std::vector<double> default_switched_A_gains(std::span<const WeightedGraph> graphs,
                                             const RhoParams& rho, double T_ref) {
    require_common_size(graphs);
    require_connected(graphs, "switched fixed-time design");
    const double gamma = settling_bound(rho);
    std::vector<double> out;
    for (const auto& g : graphs)
        out.push_back(static_gain_floor(g.vertex_count(), gamma, algebraic_connectivity(g), T_ref));
    return out;
}

GainCertificate design_T5_switched_B(std::span<const WeightedGraph> graphs, const RhoParams& rho,
                                     double T_c, double L, double margin) {
    check_inputs(rho, T_c, L, margin);
    require_common_size(graphs);
    require_connected(graphs, "switched predefined-time design");

    const double gamma = settling_bound(rho);
    std::vector<double> lambda2;
    std::size_t edges_min = graphs.front().edge_count();
    for (const auto& g : graphs) {
        lambda2.push_back(algebraic_connectivity(g));
        edges_min = std::min(edges_min, g.edge_count());
    }
    const double lambda2_star = *std::min_element(lambda2.begin(), lambda2.end());
    const double kappa = margin * switched_gain_floor(edges_min, gamma, lambda2_star, T_c);

    GainCertificate cert;
    cert.theorem = Theorem::T5_predefined_switched_B;
    cert.params.rho = rho;
    cert.params.variant = ProtocolVariant::B;
    cert.params.kappa.assign(graphs.front().vertex_count(), kappa);
    cert.params.zeta = offset_for(L, kappa, std::sqrt(lambda2_star));
    cert.T_c = T_c;
    cert.L = L;
    auto report = verify_certificate(cert, graphs);
    cert.slack = std::move(report.entries);
    cert.notes = std::move(report.notes);
    cert.gamma = gamma;
    cert.lambda2 = std::move(lambda2);
    cert.lambda2_star = lambda2_star;
    cert.edges_min = edges_min;
    return cert;
}

CertificateReport verify_certificate(const GainCertificate& cert,
                                     std::span<const WeightedGraph> graphs) {
    CertificateReport report;
    auto& out = report.entries;

    auto fail = [&](std::string name) {
        out.push_back({std::move(name), 0.0, 1.0, -1.0, false});
        report.all_pass = false;
        return report;
    };

    if (graphs.empty()) return fail("topology collection is non-empty");
    if (!cert.params.rho.is_valid()) return fail("rho satisfies k*p < 1 < k*q");
    const std::size_t n = graphs.front().vertex_count();
    for (const auto& g : graphs)
        if (g.vertex_count() != n) return fail("topologies share the vertex set");
    for (std::size_t l = 0; l < graphs.size(); ++l)
        if (!is_connected(graphs[l])) return fail("topology " + std::to_string(l) + " is connected");
    if (cert.theorem == Theorem::T4_predefined_static_A && graphs.size() != 1)
        return fail("static design has exactly one topology");
    if (!cert.kappa_per_graph.empty() && cert.kappa_per_graph.size() != graphs.size())
        return fail("one gain preset per topology");

    // Smallest gain any agent can see, over every preset.
    double kappa_min = cert.params.kappa.empty() ? 0.0 : cert.params.min_kappa();
    double kappa_max = cert.params.kappa.empty() ? 0.0 : cert.params.max_kappa();
    if (!cert.kappa_per_graph.empty()) {
        kappa_min = std::numeric_limits<double>::infinity();
        kappa_max = 0.0;
        for (const auto& preset : cert.kappa_per_graph) {
            if (preset.size() != n) return fail("gain preset length equals vertex count");
            kappa_min = std::min(kappa_min, *std::min_element(preset.begin(), preset.end()));
            kappa_max = std::max(kappa_max, *std::max_element(preset.begin(), preset.end()));
        }
    } else if (cert.params.kappa.size() != n) {
        return fail("gain vector length equals vertex count");
    }
    if (!(kappa_min > 0.0)) return fail("all gains positive");
    if (!(cert.params.zeta >= 0.0)) return fail("zeta nonnegative");

    const double gamma = settling_bound(cert.params.rho);
    const double zeta = cert.params.zeta;

    switch (cert.theorem) {
        case Theorem::T3_fixed_time_A:
            out.push_back(entry("kappa*zeta >= L", kappa_min * zeta, cert.L));
            break;
        case Theorem::T4_predefined_static_A: {
            if (!cert.T_c || !(*cert.T_c > 0.0)) return fail("T_c declared and positive");
            const double lambda2 = algebraic_connectivity(graphs.front());
            out.push_back(entry("kappa_i >= n*gamma/(lambda2*T_c)", kappa_min,
                                static_gain_floor(n, gamma, lambda2, *cert.T_c)));
            out.push_back(entry("kappa*zeta >= L", kappa_min * zeta, cert.L));
            break;
        }
        case Theorem::T5_predefined_switched_B: {
            if (!cert.T_c || !(*cert.T_c > 0.0)) return fail("T_c declared and positive");
            double lambda2_star = std::numeric_limits<double>::infinity();
            std::size_t edges_min = graphs.front().edge_count();
            for (const auto& g : graphs) {
                lambda2_star = std::min(lambda2_star, algebraic_connectivity(g));
                edges_min = std::min(edges_min, g.edge_count());
            }
            const double root = std::sqrt(lambda2_star);
            out.push_back(entry("kappa_i >= M*gamma/(lambda2_star*T_c)", kappa_min,
                                switched_gain_floor(edges_min, gamma, lambda2_star, *cert.T_c)));
            out.push_back(entry("kappa*zeta*sqrt(lambda2_star) >= L", kappa_min * zeta * root, cert.L));
            std::ostringstream note;
            note << "offset condition evaluated with kappa = min_i kappa_i = " << kappa_min
                 << "; with kappa = max_i kappa_i = " << kappa_max << " the required zeta would be "
                 << (cert.L > 0.0 ? cert.L / (kappa_max * root) : 0.0) << " instead of "
                 << (cert.L > 0.0 ? cert.L / (kappa_min * root) : 0.0);
            report.notes.push_back(note.str());
            break;
        }
    }
    report.all_pass =
        std::all_of(out.begin(), out.end(), [](const SlackEntry& e) { return e.pass; });
    return report;
}

std::vector<ProtocolParams> gain_schedule(const GainCertificate& cert, std::size_t graph_count) {
    std::vector<ProtocolParams> out(graph_count, cert.params);
    if (!cert.kappa_per_graph.empty()) {
        if (cert.kappa_per_graph.size() != graph_count)
            throw std::invalid_argument("gain_schedule: preset count differs from topology count");
        for (std::size_t l = 0; l < graph_count; ++l) out[l].kappa = cert.kappa_per_graph[l];
    }
    return out;
}

}  // namespace consensus_lab
