#pragma once

#include <cmath>
#include <random>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "consensus_lab/fixed_time.hpp"

namespace consensus_lab {

// f(x) = x (alpha x^p + beta x^q)^k on x > 0, the function whose
// monotonicity and convexity carry the consensus Lyapunov estimates.
class PolyFunc {
public:
    explicit PolyFunc(RhoParams rho);  // validates rho

    [[nodiscard]] const RhoParams& rho() const noexcept { return rho_; }

private:
    RhoParams rho_;
};

// All three throw std::invalid_argument for x <= 0.
[[nodiscard]] double f_eval(const PolyFunc& pf, double x);
[[nodiscard]] double f_first_derivative(const PolyFunc& pf, double x);
[[nodiscard]] double f_second_derivative(const PolyFunc& pf, double x);

// Richardson-extrapolated central second difference of f_eval; the
// independent reference for f_second_derivative.
[[nodiscard]] double f_second_difference(const PolyFunc& pf, double x);

struct InequalityResult {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // (lhs - rhs) / max(|lhs|, tiny); >= 0 when the inequality holds
};

// mean_i f(a_i) >= f(mean_i a_i). Throws on empty input or any a_i <= 0.
[[nodiscard]] InequalityResult jensen_poly_check(const PolyFunc& pf, std::span<const double> a,
                                                 double tolerance = 1e-12);

// l-norm (p >= 1), scaled against the largest entry to avoid overflow.
[[nodiscard]] double lp_norm(std::span<const double> z, double p);

// ||z||_l <= ||z||_r for l >= r >= 1; lhs = ||z||_r, rhs = ||z||_l.
// Throws std::invalid_argument unless l >= r >= 1.
[[nodiscard]] InequalityResult norm_ordering_check(std::span<const double> z, double l, double r,
                                                   double tolerance = 1e-12);

struct LemmaStats {
    std::string name;
    std::size_t cases = 0;
    std::size_t violations = 0;
    double worst_margin = 0.0;  // most negative margin seen (or smallest positive)
};

struct LemmaSuiteOptions {
    std::size_t cases = 10000;
    std::uint64_t seed = 20190101;
    double margin_floor = -1e-12;
    double derivative_rel_tol = 1e-6;
};

// Randomised checks of monotonicity, convexity (chords, sign of f'', and
// f'' against finite differences), the Jensen-type inequality and the p-norm
// ordering. One LemmaStats entry per property.
[[nodiscard]] std::vector<LemmaStats> run_lemma_suite(const LemmaSuiteOptions& opts = {});

// Draws a valid rho from the ranges used by the randomised suites.
template <class Rng>
RhoParams sample_rho(Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) {
        return lo * std::pow(hi / lo, unit(rng));
    };
    RhoParams rho;
    rho.alpha = log_uniform(0.1, 10.0);
    rho.beta = log_uniform(0.1, 10.0);
    rho.k = 0.1 + 2.9 * unit(rng);
    const double kp = 0.05 + 0.9 * unit(rng);
    const double kq = 1.05 + 8.95 * unit(rng);
    rho.p = kp / rho.k;
    rho.q = kq / rho.k;
    return rho;
}

}  // namespace consensus_lab
