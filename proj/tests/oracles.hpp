#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "consensus_lab/dense_matrix.hpp"
#include "consensus_lab/fixed_time.hpp"
#include "consensus_lab/graph.hpp"

namespace oracle {

using consensus_lab::DenseMatrix;
using consensus_lab::RhoParams;
using consensus_lab::WeightedGraph;

// Composite Simpson on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Gamma(z) = (1/z) int_0^inf exp(-u^(1/z)) du, written with u = e^s so both
// tails decay fast enough for a plain Simpson rule.
inline double gamma_integral(double z) {
    auto integrand = [z](double s) {
        const double u = std::exp(s);
        return std::exp(-std::pow(u, 1.0 / z)) * u;
    };
    return simpson(integrand, -60.0, 8.0 * z, 400000) / z;
}

// Settling bound as the time the scalar flow needs from infinity to 0:
// int_0^inf dz / (alpha z^p + beta z^q)^k, with z = e^s.
inline double settling_integral(const RhoParams& r) {
    auto integrand = [&r](double s) {
        const double z = std::exp(s);
        return z / std::pow(r.alpha * std::pow(z, r.p) + r.beta * std::pow(z, r.q), r.k);
    };
    const double lo = -60.0 / (1.0 - r.k * r.p);
    const double hi = 60.0 / (r.k * r.q - 1.0);
    return simpson(integrand, lo, hi, 400000);
}

// Q = diag(A 1) - A from the adjacency matrix.
inline DenseMatrix laplacian_from_adjacency(const WeightedGraph& g) {
    const auto a = g.adjacency_matrix();
    const std::size_t n = g.vertex_count();
    DenseMatrix q(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double deg = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            deg += a(i, j);
            q(i, j) = -a(i, j);
        }
        q(i, i) += deg;
    }
    return q;
}

// D D^T by explicit triple loop.
inline DenseMatrix gram(const DenseMatrix& d) {
    DenseMatrix out(d.rows(), d.rows());
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.rows(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d.cols(); ++k) s += d(i, k) * d(j, k);
            out(i, j) = s;
        }
    return out;
}

inline std::vector<double> matvec(const DenseMatrix& m, const std::vector<double>& x) {
    std::vector<double> y(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) y[i] += m(i, j) * x[j];
    return y;
}

inline std::vector<double> matTvec(const DenseMatrix& m, const std::vector<double>& x) {
    std::vector<double> y(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) y[j] += m(i, j) * x[i];
    return y;
}

// phi written out directly with pow, no log-space tricks.
inline double phi_direct(double z, const RhoParams& r, double zeta) {
    if (z == 0.0) return 0.0;
    const double a = std::abs(z);
    const double mag = std::pow(r.alpha * std::pow(a, r.p) + r.beta * std::pow(a, r.q), r.k) + zeta;
    return z > 0.0 ? mag : -mag;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> x(n);
    for (auto& v : x) v = u(rng);
    return x;
}

}  // namespace oracle
