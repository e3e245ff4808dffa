#include <doctest.h>

#include <cmath>
#include <random>

#include "consensus_lab/graph.hpp"
#include "consensus_lab/protocol.hpp"
#include "oracles.hpp"

using namespace consensus_lab;

namespace {

const RhoParams rho{1.0, 2.0, 1.5, 3.0, 0.5};

ProtocolParams params(ProtocolVariant v, std::size_t n, double kappa = 1.0, double zeta = 0.0) {
    ProtocolParams p;
    p.rho = rho;
    p.variant = v;
    p.kappa.assign(n, kappa);
    p.zeta = zeta;
    return p;
}

}  // namespace

TEST_CASE("phi basics") {
    CHECK(phi(0.0, rho, 0.3) == 0.0);
    CHECK(phi(1.0, rho, 0.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(phi(1.0, rho, 0.5) == doctest::Approx(std::sqrt(3.0) + 0.5).epsilon(1e-14));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 500; ++i) {
        const double z = u(rng);
        CHECK(phi(-z, rho, 0.2) == -phi(z, rho, 0.2));
        CHECK(phi(z, rho, 0.2) == doctest::Approx(oracle::phi_direct(z, rho, 0.2)).epsilon(1e-12));
    }
    double prev = 0.0;
    for (double z = 1e-4; z < 50.0; z *= 1.1) {
        const double now = phi(z, rho, 0.0);
        CHECK(now > prev);
        prev = now;
    }
}

TEST_CASE("params validation") {
    auto p = params(ProtocolVariant::A, 3);
    CHECK_NOTHROW(p.validate(3));
    CHECK_THROWS_AS(p.validate(4), std::invalid_argument);
    p.kappa[1] = 0.0;
    CHECK_THROWS_AS(p.validate(3), std::invalid_argument);
    p = params(ProtocolVariant::A, 3, 1.0, -0.1);
    CHECK_THROWS_AS(p.validate(3), std::invalid_argument);
    p = params(ProtocolVariant::A, 3);
    p.rho.k = 1.0;  // k*p = 1.5
    CHECK_THROWS_AS(p.validate(3), std::invalid_argument);
}

TEST_CASE("control A by hand") {
    WeightedGraph g(2, {{0, 1, 1.0}});
    auto u = control_A(g, std::vector<double>{1.0, 0.0}, params(ProtocolVariant::A, 2));
    CHECK(u[0] == doctest::Approx(-std::sqrt(3.0)));
    CHECK(u[1] == doctest::Approx(std::sqrt(3.0)));
    for (double v : control_A(random_connected_graph(8, 3), std::vector<double>(8, 4.2),
                              params(ProtocolVariant::A, 8, 2.0, 0.3)))
        CHECK(v == 0.0);
    CHECK_THROWS_AS((void)control_A(g, std::vector<double>{1.0, 0.0}, params(ProtocolVariant::B, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)control_A(g, std::vector<double>{1.0}, params(ProtocolVariant::A, 2)),
                    std::invalid_argument);
}

TEST_CASE("control B by hand") {
    WeightedGraph g(2, {{0, 1, 1.0}});
    auto u = control_B(g, std::vector<double>{1.0, 0.0}, params(ProtocolVariant::B, 2, 3.0));
    CHECK(u[0] == doctest::Approx(-3.0 * std::sqrt(3.0)));
    CHECK(u[1] == doctest::Approx(3.0 * std::sqrt(3.0)));
    CHECK(u[0] + u[1] == doctest::Approx(0.0));
    for (double v : control_B(random_connected_graph(8, 3), std::vector<double>(8, -1.0),
                              params(ProtocolVariant::B, 8, 2.0, 0.3)))
        CHECK(v == 0.0);
    CHECK_THROWS_AS((void)control_B(g, std::vector<double>{1.0, 0.0}, params(ProtocolVariant::A, 2)),
                    std::invalid_argument);
}

TEST_CASE("variant A matches -Phi(Q x) with per-agent gains") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ku(1.0, 50.0);
    for (int rep = 0; rep < 50; ++rep) {
        auto g = random_connected_graph(10, 200 + rep);
        auto p = params(ProtocolVariant::A, 10, 1.0, 0.05);
        for (auto& k : p.kappa) k = ku(rng);
        auto x = oracle::random_vector(rng, 10, 10.0);
        auto d = oracle::random_vector(rng, 10, 1.0);
        auto qx = oracle::matvec(oracle::laplacian_from_adjacency(g), x);
        auto f = closed_loop_field(g, x, p, d);
        for (std::size_t i = 0; i < 10; ++i) {
            const double ref = -p.kappa[i] * oracle::phi_direct(qx[i], rho, p.zeta) + d[i];
            CHECK(f[i] == doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("variant B matches -D Phi(D^T x) for equal gains") {
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 50; ++rep) {
        auto g = random_connected_graph(10, 300 + rep);
        auto p = params(ProtocolVariant::B, 10, 7.5, 0.05);
        auto x = oracle::random_vector(rng, 10, 10.0);
        auto d = oracle::random_vector(rng, 10, 1.0);
        const auto D = laplacian(g).incidence;
        auto dtx = oracle::matTvec(D, x);
        for (auto& z : dtx) z = oracle::phi_direct(z, rho, p.zeta);
        auto dphi = oracle::matvec(D, dtx);
        auto f = closed_loop_field(g, x, p, d);
        for (std::size_t i = 0; i < 10; ++i)
            CHECK(f[i] == doctest::Approx(-7.5 * dphi[i] + d[i]).epsilon(1e-10));
    }
}

TEST_CASE("variant B per-agent gains follow the literal per-node form") {
    std::mt19937_64 rng(8);
    auto g = random_connected_graph(9, 77);
    auto p = params(ProtocolVariant::B, 9, 1.0, 0.1);
    for (std::size_t i = 0; i < 9; ++i) p.kappa[i] = 1.0 + i;
    auto x = oracle::random_vector(rng, 9, 5.0);
    auto u = control_B(g, x, p);
    for (std::size_t i = 0; i < 9; ++i) {
        double s = 0.0;
        for (const auto& nb : g.neighbors(i))
            s += std::sqrt(nb.weight) * oracle::phi_direct(std::sqrt(nb.weight) * (x[nb.vertex] - x[i]), rho, p.zeta);
        CHECK(u[i] == doctest::Approx(p.kappa[i] * s).epsilon(1e-12));
    }
}

TEST_CASE("equal-gain variant B sums to zero") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 1000; ++rep) {
        auto g = random_connected_graph(3 + rep % 20, 1000 + rep);
        auto p = params(ProtocolVariant::B, g.vertex_count(), 12.0, 0.2);
        auto x = oracle::random_vector(rng, g.vertex_count(), 100.0);
        auto u = control_B(g, x, p);
        double sum = 0.0, l1 = 0.0;
        for (double v : u) { sum += v; l1 += std::abs(v); }
        CHECK(std::abs(sum) <= 1e-12 * l1);
    }
}

TEST_CASE("variant A with unequal gains does not conserve the sum") {
    std::mt19937_64 rng(10);
    bool found = false;
    for (int rep = 0; rep < 20 && !found; ++rep) {
        auto g = random_connected_graph(6, 50 + rep);
        auto p = params(ProtocolVariant::A, 6);
        for (std::size_t i = 0; i < 6; ++i) p.kappa[i] = 1.0 + i;
        auto u = control_A(g, oracle::random_vector(rng, 6, 3.0), p);
        double sum = 0.0;
        for (double v : u) sum += v;
        found = std::abs(sum) > 1e-6;
    }
    CHECK(found);
}

TEST_CASE("controls are translation invariant") {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 100; ++rep) {
        auto g = random_connected_graph(7, 400 + rep);
        auto x = oracle::random_vector(rng, 7, 10.0);
        auto y = x;
        for (auto& v : y) v += 0.5;  // exact in binary, so e is unchanged bit for bit
        for (auto v : {ProtocolVariant::A, ProtocolVariant::B}) {
            auto p = params(v, 7, 3.0, 0.1);
            std::vector<double> ux(7), uy(7);
            control_into(g, x, p, ux);
            control_into(g, y, p, uy);
            for (std::size_t i = 0; i < 7; ++i) CHECK(ux[i] == doctest::Approx(uy[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("no spurious equilibria off the consensus line") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 300; ++rep) {
        auto g = random_connected_graph(6, 500 + rep);
        auto x = oracle::random_vector(rng, 6, 1.0);
        const std::vector<double> zero(6, 0.0);
        for (auto v : {ProtocolVariant::A, ProtocolVariant::B}) {
            auto f = closed_loop_field(g, x, params(v, 6), zero);
            double mx = 0.0;
            for (double fi : f) mx = std::max(mx, std::abs(fi));
            CHECK(mx > 0.0);
        }
    }
    auto g = random_connected_graph(6, 1);
    for (auto v : {ProtocolVariant::A, ProtocolVariant::B})
        for (double fi : closed_loop_field(g, std::vector<double>(6, 2.0), params(v, 6, 1.0, 0.4),
                                           std::vector<double>(6, 0.0)))
            CHECK(fi == 0.0);
}

TEST_CASE("closed loop checks dimensions") {
    auto g = random_connected_graph(4, 2);
    CHECK_THROWS_AS((void)closed_loop_field(g, std::vector<double>(4, 0.0), params(ProtocolVariant::A, 4),
                                            std::vector<double>(3, 0.0)),
                    std::invalid_argument);
}
