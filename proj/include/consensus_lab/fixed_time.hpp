#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

namespace consensus_lab {

// Shape parameters of the scalar fixed-time system
//   xdot = -(alpha |x|^p + beta |x|^q)^k sign(x).
// Valid iff all are positive, k*p < 1 and k*q > 1.
struct RhoParams {
    double alpha = 1.0;
    double beta = 1.0;
    double p = 0.5;
    double q = 2.0;
    double k = 1.0;

    // Throws std::invalid_argument naming the first violated constraint.
    void validate() const;
    [[nodiscard]] bool is_valid() const noexcept;

    friend bool operator==(const RhoParams&, const RhoParams&) = default;
};

// (alpha z^p + beta z^q)^k for z >= 0, evaluated in log space so large
// exponents do not overflow the intermediate sum.
[[nodiscard]] double poly_rate(double z, const RhoParams& rho) noexcept;

// Gamma function for z > 0 (Lanczos, g = 7, 9 terms; reflection below 0.5).
[[nodiscard]] double gamma_function(double z);

// Least upper bound of the settling time of the scalar system.
[[nodiscard]] double settling_bound(const RhoParams& rho);

class NonTermination : public std::runtime_error {
public:
    NonTermination(double t, double x)
        : std::runtime_error("scalar_settling_oracle: no convergence by t = " + std::to_string(t)),
          time(t), state(x) {}
    double time;
    double state;
};

struct OracleOptions {
    // Stop once |x| < threshold. Near zero the step limiter shrinks |x|
    // geometrically, so a tiny threshold costs a few thousand steps and the
    // remaining time to zero is negligible even for kp close to 1.
    double absolute_threshold = 1e-200;
    double max_step_fraction = 0.01;   // a step never moves x by more than this fraction of |x|
    double time_limit_factor = 10.0;   // give up after factor * settling_bound
};

// Brute-force settling time of the scalar system by explicit Euler with
// nominal step h. The step is shortened where a full step would move the
// state by more than max_step_fraction of its magnitude, which keeps the
// steep |x|^q branch from overshooting; elsewhere the step is exactly h.
// Throws NonTermination when the time limit is exceeded.
[[nodiscard]] double scalar_settling_oracle(const RhoParams& rho, double x0, double h,
                                            const OracleOptions& opts = {});

struct RateCheckOptions {
    double value_tol = 1e-9;  // samples with V <= value_tol are not checked
    double slack = 0.05;      // relative slack on the decay bound
};

struct RateCheckResult {
    bool pass = true;
    // Largest shortfall (1 - slack) - observed/required over checked
    // intervals; <= 0 means every interval decays fast enough.
    double max_violation = 0.0;
    std::size_t checked = 0;
    std::size_t worst_index = 0;
};

// Checks D+V <= -(gamma(rho)/T_c) (alpha V^p + beta V^q)^k on a sampled
// trace. Each interval's forward difference is compared against the bound
// evaluated at the smaller endpoint value, which is what the continuous
// inequality implies for the average slope of a decreasing V.
// Throws std::invalid_argument on fewer than 2 samples, mismatched sizes,
// non-increasing times or negative values.
[[nodiscard]] RateCheckResult lyapunov_rate_check(std::span<const double> times,
                                                  std::span<const double> values,
                                                  const RhoParams& rho, double T_c,
                                                  const RateCheckOptions& opts = {});

}  // namespace consensus_lab
