#include "consensus_lab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace consensus_lab {

PolyFunc::PolyFunc(RhoParams rho) : rho_(rho) { rho_.validate(); }

namespace {

void require_positive(double x, const char* who) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument(std::string(who) + ": x must be positive and finite");
}

// Shares A = alpha x^p / s and B = beta x^q / s of s = alpha x^p + beta x^q.
std::pair<double, double> shares(const RhoParams& rho, double x) {
    const double ratio = (rho.beta / rho.alpha) * std::pow(x, rho.q - rho.p);  // B / A
    if (std::isinf(ratio)) return {0.0, 1.0};
    const double a = 1.0 / (1.0 + ratio);
    return {a, ratio * a};
}

double relative_margin(double lhs, double rhs) {
    const double scale = std::max(std::abs(lhs), std::numeric_limits<double>::min());
    return (lhs - rhs) / scale;
}

}  // namespace

double f_eval(const PolyFunc& pf, double x) {
    require_positive(x, "f_eval");
    return x * poly_rate(x, pf.rho());
}

double f_first_derivative(const PolyFunc& pf, double x) {
    require_positive(x, "f_first_derivative");
    const auto& r = pf.rho();
    const auto [a, b] = shares(r, x);
    // f' = s^k (1 + k (p A + q B))
    return poly_rate(x, r) * (1.0 + r.k * (r.p * a + r.q * b));
}

double f_second_derivative(const PolyFunc& pf, double x) {
    require_positive(x, "f_second_derivative");
    const auto& r = pf.rho();
    const auto [a, b] = shares(r, x);
    const double mixed = 2.0 * r.k * r.p * r.q + r.p + r.q + (r.q - r.p) * (r.q - r.p);
    const double bracket = a * a * r.p * (r.k * r.p + 1.0) + a * b * mixed +
                           b * b * r.q * (r.k * r.q + 1.0);
    return (r.k / x) * poly_rate(x, r) * bracket;
}

double f_second_difference(const PolyFunc& pf, double x) {
    require_positive(x, "f_second_difference");
    auto central = [&](double h) {
        return (f_eval(pf, x + h) - 2.0 * f_eval(pf, x) + f_eval(pf, x - h)) / (h * h);
    };
    const double h = 4e-3 * x;
    return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

InequalityResult jensen_poly_check(const PolyFunc& pf, std::span<const double> a, double tolerance) {
    if (a.empty()) throw std::invalid_argument("jensen_poly_check: empty sequence");
    for (double v : a) require_positive(v, "jensen_poly_check");
    const double n = static_cast<double>(a.size());
    double lhs = 0.0;
    for (double v : a) lhs += f_eval(pf, v);
    lhs /= n;
    const double mean = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double rhs = f_eval(pf, mean);
    InequalityResult r{false, lhs, rhs, relative_margin(lhs, rhs)};
    r.holds = r.margin >= -tolerance;
    return r;
}

double lp_norm(std::span<const double> z, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    double big = 0.0;
    for (double v : z) big = std::max(big, std::abs(v));
    if (big == 0.0) return 0.0;
    double acc = 0.0;
    for (double v : z) acc += std::pow(std::abs(v) / big, p);
    return big * std::pow(acc, 1.0 / p);
}

InequalityResult norm_ordering_check(std::span<const double> z, double l, double r,
                                     double tolerance) {
    if (!(r >= 1.0) || !(l >= r))
        throw std::invalid_argument("norm_ordering_check: need l >= r >= 1");
    const double small = lp_norm(z, l);
    const double large = lp_norm(z, r);
    InequalityResult out{false, large, small, large == 0.0 ? 0.0 : relative_margin(large, small)};
    out.holds = out.margin >= -tolerance;
    return out;
}

std::vector<LemmaStats> run_lemma_suite(const LemmaSuiteOptions& opts) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, unit(rng)); };

    LemmaStats mono{"monotonicity: x1 < x2 => f(x1) < f(x2), f' > 0"};
    LemmaStats chord{"convexity: midpoint chord"};
    LemmaStats curvature{"convexity: f'' > 0 and matches finite differences"};
    LemmaStats jensen{"Jensen-type mean inequality"};
    LemmaStats norms{"p-norm ordering"};
    for (auto* s : {&mono, &chord, &curvature, &jensen, &norms})
        s->worst_margin = std::numeric_limits<double>::infinity();

    auto tally = [&](LemmaStats& s, double margin, bool ok) {
        ++s.cases;
        if (!ok) ++s.violations;
        s.worst_margin = std::min(s.worst_margin, margin);
    };

    for (std::size_t c = 0; c < opts.cases; ++c) {
        const PolyFunc pf(sample_rho(rng));

        {
            const double x1 = log_uniform(1e-2, 1e2);
            const double x2 = x1 * (1.0 + log_uniform(1e-3, 10.0));
            const double f1 = f_eval(pf, x1);
            const double f2 = f_eval(pf, x2);
            const double margin = relative_margin(f2, f1);
            tally(mono, margin, f2 > f1 && f_first_derivative(pf, x1) > 0.0);
        }
        {
            const double x1 = log_uniform(1e-2, 1e2);
            const double x2 = log_uniform(1e-2, 1e2);
            const double lhs = 0.5 * (f_eval(pf, x1) + f_eval(pf, x2));
            const double rhs = f_eval(pf, 0.5 * (x1 + x2));
            const double margin = relative_margin(lhs, rhs);
            tally(chord, margin, margin >= opts.margin_floor);
        }
        {
            const double x = log_uniform(1e-2, 1e2);
            const double exact = f_second_derivative(pf, x);
            const double numeric = f_second_difference(pf, x);
            const double rel = std::abs(exact - numeric) / std::abs(exact);
            tally(curvature, -rel, exact > 0.0 && rel <= opts.derivative_rel_tol);
        }
        {
            std::uniform_int_distribution<std::size_t> len(1, 20);
            std::vector<double> a(len(rng));
            for (auto& v : a) v = log_uniform(1e-2, 1e2);
            const auto r = jensen_poly_check(pf, a, -opts.margin_floor);
            tally(jensen, r.margin, r.holds);
        }
        {
            std::uniform_int_distribution<std::size_t> len(1, 20);
            std::normal_distribution<double> normal(0.0, 1.0);
            std::vector<double> z(len(rng));
            const double scale = log_uniform(1e-3, 1e3);
            for (auto& v : z) v = scale * normal(rng);
            const double r = 1.0 + 9.0 * unit(rng);
            const double l = r + 9.0 * unit(rng);
            const auto res = norm_ordering_check(z, l, r, -opts.margin_floor);
            tally(norms, res.margin, res.holds);
        }
    }
    return {mono, chord, curvature, jensen, norms};
}

}  // namespace consensus_lab
