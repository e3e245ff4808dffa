#include "consensus_lab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>

namespace consensus_lab {

WeightedGraph::WeightedGraph(std::size_t n, std::vector<Edge> edges) : n_(n) {
    if (n == 0) throw std::invalid_argument("WeightedGraph: vertex count must be >= 1");
    for (auto& e : edges) {
        if (e.i == e.j)
            throw std::invalid_argument("WeightedGraph: self-loop at vertex " + std::to_string(e.i));
        if (e.i >= n || e.j >= n)
            throw std::invalid_argument("WeightedGraph: edge endpoint out of range");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw std::invalid_argument("WeightedGraph: edge weights must be positive and finite");
        if (e.i > e.j) std::swap(e.i, e.j);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    for (std::size_t k = 1; k < edges.size(); ++k) {
        if (edges[k].i == edges[k - 1].i && edges[k].j == edges[k - 1].j)
            throw std::invalid_argument("WeightedGraph: duplicate edge (" + std::to_string(edges[k].i) +
                                        ", " + std::to_string(edges[k].j) + ")");
    }
    edges_ = std::move(edges);

    adjacency_.resize(n_);
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const auto& e = edges_[k];
        adjacency_[e.i].push_back({e.j, e.weight, k});
        adjacency_[e.j].push_back({e.i, e.weight, k});
    }
}

double WeightedGraph::degree(std::size_t v) const {
    double d = 0.0;
    for (const auto& nb : neighbors(v)) d += nb.weight;
    return d;
}

DenseMatrix WeightedGraph::adjacency_matrix() const {
    DenseMatrix a(n_, n_);
    for (const auto& e : edges_) {
        a(e.i, e.j) = e.weight;
        a(e.j, e.i) = e.weight;
    }
    return a;
}

WeightedGraph WeightedGraph::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw std::invalid_argument("WeightedGraph::scaled: factor must be positive");
    std::vector<Edge> out = edges_;
    for (auto& e : out) e.weight *= factor;
    return WeightedGraph(n_, std::move(out));
}

LaplacianView laplacian(const WeightedGraph& g) {
    const std::size_t n = g.vertex_count();
    const auto edges = g.edges();
    LaplacianView view{DenseMatrix(n, n), DenseMatrix(n, edges.size())};
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto& e = edges[k];
        view.laplacian(e.i, e.j) -= e.weight;
        view.laplacian(e.j, e.i) -= e.weight;
        view.laplacian(e.i, e.i) += e.weight;
        view.laplacian(e.j, e.j) += e.weight;
        const double s = std::sqrt(e.weight);
        view.incidence(e.i, k) = s;
        view.incidence(e.j, k) = -s;
    }
    return view;
}

double algebraic_connectivity(const WeightedGraph& g) {
    if (g.vertex_count() < 2)
        throw std::invalid_argument("algebraic_connectivity: need at least 2 vertices");
    const auto eig = symmetric_eigenvalues(laplacian(g).laplacian);
    return std::max(0.0, eig[1]);
}

bool is_connected(const WeightedGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n == 0) return false;
    std::vector<char> seen(n, 0);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const auto v = frontier.front();
        frontier.pop();
        for (const auto& nb : g.neighbors(v)) {
            if (!seen[nb.vertex]) {
                seen[nb.vertex] = 1;
                ++reached;
                frontier.push(nb.vertex);
            }
        }
    }
    return reached == n;
}

namespace {
void require_state_size(const WeightedGraph& g, std::span<const double> x, const char* who) {
    if (x.size() != g.vertex_count())
        throw std::invalid_argument(std::string(who) + ": state has " + std::to_string(x.size()) +
                                    " entries, graph has " + std::to_string(g.vertex_count()) +
                                    " vertices");
}
}  // namespace

std::vector<double> neighbor_error_A(const WeightedGraph& g, std::span<const double> x) {
    require_state_size(g, x, "neighbor_error_A");
    std::vector<double> e(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double acc = 0.0;
        for (const auto& nb : g.neighbors(i)) acc += nb.weight * (x[nb.vertex] - x[i]);
        e[i] = acc;
    }
    return e;
}

std::vector<double> edge_errors_B(const WeightedGraph& g, std::span<const double> x) {
    require_state_size(g, x, "edge_errors_B");
    const auto edges = g.edges();
    std::vector<double> e(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k)
        e[k] = std::sqrt(edges[k].weight) * (x[edges[k].j] - x[edges[k].i]);
    return e;
}

WeightedGraph path_graph(std::size_t n, double weight) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight});
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph cycle_graph(std::size_t n, double weight) {
    if (n < 3) throw std::invalid_argument("cycle_graph: need at least 3 vertices");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight});
    edges.push_back({0, n - 1, weight});
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph star_graph(std::size_t n, double weight) {
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < n; ++i) edges.push_back({0, i, weight});
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph complete_graph(std::size_t n, double weight) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j, weight});
    return WeightedGraph(n, std::move(edges));
}

namespace {
void check_options(const RandomGraphOptions& opts) {
    if (!(opts.weight_min > 0.0) || opts.weight_max < opts.weight_min)
        throw std::invalid_argument("RandomGraphOptions: need 0 < weight_min <= weight_max");
    if (opts.extra_edge_probability < 0.0 || opts.extra_edge_probability > 1.0)
        throw std::invalid_argument("RandomGraphOptions: probability outside [0, 1]");
}
}  // namespace

WeightedGraph random_connected_graph(std::size_t n, std::uint64_t seed,
                                     const RandomGraphOptions& opts) {
    if (n == 0) throw std::invalid_argument("random_connected_graph: n must be >= 1");
    check_options(opts);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> weight(opts.weight_min, opts.weight_max);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::vector<char>> present(n, std::vector<char>(n, 0));
    std::vector<Edge> edges;
    for (std::size_t k = 1; k < n; ++k) {
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        const std::size_t a = order[k];
        const std::size_t b = order[pick(rng)];
        present[a][b] = present[b][a] = 1;
        edges.push_back({a, b, weight(rng)});
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (present[i][j]) continue;
            if (coin(rng) < opts.extra_edge_probability) edges.push_back({i, j, weight(rng)});
        }
    }
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph random_graph(std::size_t n, double edge_probability, std::uint64_t seed,
                           const RandomGraphOptions& opts) {
    check_options(opts);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> weight(opts.weight_min, opts.weight_max);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng) < edge_probability) edges.push_back({i, j, weight(rng)});
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph calibrate_lambda2(const WeightedGraph& g, double target_lambda2) {
    if (!(target_lambda2 > 0.0)) throw std::invalid_argument("calibrate_lambda2: target must be > 0");
    if (!is_connected(g)) throw std::invalid_argument("calibrate_lambda2: graph is disconnected");
    return g.scaled(target_lambda2 / algebraic_connectivity(g));
}

}  // namespace consensus_lab
