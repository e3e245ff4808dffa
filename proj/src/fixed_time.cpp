#include "consensus_lab/fixed_time.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace consensus_lab {

void RhoParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("rho: ") + name + " must be positive and finite");
    };
    positive(alpha, "alpha");
    positive(beta, "beta");
    positive(p, "p");
    positive(q, "q");
    positive(k, "k");
    if (!(k * p < 1.0))
        throw std::invalid_argument("rho: fixed-time constraint k*p < 1 violated (k*p = " +
                                    std::to_string(k * p) + ")");
    if (!(k * q > 1.0))
        throw std::invalid_argument("rho: fixed-time constraint k*q > 1 violated (k*q = " +
                                    std::to_string(k * q) + ")");
}

bool RhoParams::is_valid() const noexcept {
    try {
        validate();
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

double poly_rate(double z, const RhoParams& rho) noexcept {
    if (!(z > 0.0)) return 0.0;
    const double lz = std::log(z);
    const double a = std::log(rho.alpha) + rho.p * lz;
    const double b = std::log(rho.beta) + rho.q * lz;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return std::exp(rho.k * (hi + std::log1p(std::exp(lo - hi))));
}

namespace {
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
}  // namespace

double gamma_function(double z) {
    if (!(z > 0.0) || !std::isfinite(z))
        throw std::invalid_argument("gamma_function: argument must be positive and finite");
    if (z < 0.5) {
        // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z).
        return std::numbers::pi / (std::sin(std::numbers::pi * z) * gamma_function(1.0 - z));
    }
    const double x = z - 1.0;
    double a = kLanczosCoeffs[0];
    const double t = x + kLanczosG + 0.5;
    for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i)
        a += kLanczosCoeffs[i] / (x + static_cast<double>(i));
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double settling_bound(const RhoParams& rho) {
    rho.validate();
    const double spread = rho.q - rho.p;
    const double lower = (1.0 - rho.k * rho.p) / spread;
    const double upper = (rho.k * rho.q - 1.0) / spread;
    return gamma_function(lower) * gamma_function(upper) /
           (std::pow(rho.alpha, rho.k) * gamma_function(rho.k) * spread) *
           std::pow(rho.alpha / rho.beta, lower);
}

double scalar_settling_oracle(const RhoParams& rho, double x0, double h,
                              const OracleOptions& opts) {
    if (!(h > 0.0)) throw std::invalid_argument("scalar_settling_oracle: step must be positive");
    const double bound = settling_bound(rho);
    const double threshold = opts.absolute_threshold;
    const double t_limit = opts.time_limit_factor * bound;

    double x = x0;
    double t = 0.0;
    while (std::abs(x) >= threshold) {
        const double mag = std::abs(x);
        const double rate = poly_rate(mag, rho);
        const double step = std::min(h, opts.max_step_fraction * mag / rate);
        x -= step * rate * (x > 0.0 ? 1.0 : -1.0);
        t += step;
        if (t > t_limit) throw NonTermination(t, x);
    }
    return t;
}

RateCheckResult lyapunov_rate_check(std::span<const double> times, std::span<const double> values,
                                    const RhoParams& rho, double T_c, const RateCheckOptions& opts) {
    if (times.size() != values.size())
        throw std::invalid_argument("lyapunov_rate_check: times and values differ in length");
    if (times.size() < 2) throw std::invalid_argument("lyapunov_rate_check: need at least 2 samples");
    if (!(T_c > 0.0)) throw std::invalid_argument("lyapunov_rate_check: T_c must be positive");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0 || !std::isfinite(values[i]))
            throw std::invalid_argument("lyapunov_rate_check: values must be finite and nonnegative");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw std::invalid_argument("lyapunov_rate_check: times must be strictly increasing");
    }

    const double gain = settling_bound(rho) / T_c;
    RateCheckResult result;
    result.max_violation = 0.0;
    bool first = true;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        if (values[i] <= opts.value_tol) continue;
        const double slope = (values[i + 1] - values[i]) / (times[i + 1] - times[i]);
        const double required = gain * poly_rate(std::min(values[i], values[i + 1]), rho);
        double violation;
        if (required > 0.0) {
            violation = (1.0 - opts.slack) - (-slope / required);
        } else {
            // V dropped to exactly zero over the interval.
            violation = slope <= 0.0 ? -1.0 : 1.0;
        }
        ++result.checked;
        if (first || violation > result.max_violation) {
            result.max_violation = violation;
            result.worst_index = i;
            first = false;
        }
    }
    if (result.checked == 0) result.max_violation = 0.0;
    result.pass = result.max_violation <= 0.0;
    return result;
}

}  // namespace consensus_lab
