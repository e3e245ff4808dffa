#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "consensus_lab/dense_matrix.hpp"

namespace consensus_lab {

struct Edge {
    std::size_t i = 0;
    std::size_t j = 0;
    double weight = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Undirected weighted graph on vertices 0..n-1. Edges are stored with i < j,
// sorted lexicographically; that order is also the column order of the
// incidence matrix. Immutable after construction.
class WeightedGraph {
public:
    struct Neighbor {
        std::size_t vertex;
        double weight;
        std::size_t edge;  // index into edges()
    };

    WeightedGraph() = default;

    // Throws std::invalid_argument on n == 0, self-loops, out-of-range
    // endpoints, duplicate pairs, or non-positive / non-finite weights.
    // Endpoints may be given in either order.
    WeightedGraph(std::size_t n, std::vector<Edge> edges);

    [[nodiscard]] std::size_t vertex_count() const noexcept { return n_; }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
    [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }
    [[nodiscard]] std::span<const Neighbor> neighbors(std::size_t v) const {
        return adjacency_.at(v);
    }
    [[nodiscard]] double degree(std::size_t v) const;

    [[nodiscard]] DenseMatrix adjacency_matrix() const;

    // Every weight multiplied by factor (> 0). The Laplacian spectrum scales
    // linearly with it.
    [[nodiscard]] WeightedGraph scaled(double factor) const;

    friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

struct LaplacianView {
    DenseMatrix laplacian;  // Q = Delta - A
    DenseMatrix incidence;  // D, n x |E|, Q = D D^T
};

[[nodiscard]] LaplacianView laplacian(const WeightedGraph& g);

// Second-smallest Laplacian eigenvalue (Jacobi). Throws for n < 2.
[[nodiscard]] double algebraic_connectivity(const WeightedGraph& g);

// Breadth-first reachability from vertex 0.
[[nodiscard]] bool is_connected(const WeightedGraph& g);

// e_i = sum_j a_ij (x_j - x_i), i.e. e = -Q x.
[[nodiscard]] std::vector<double> neighbor_error_A(const WeightedGraph& g,
                                                   std::span<const double> x);

// One entry per edge (i < j), in edge order: sqrt(a_ij) (x_j - x_i) = -(D^T x).
[[nodiscard]] std::vector<double> edge_errors_B(const WeightedGraph& g,
                                                std::span<const double> x);

// ---- generators -----------------------------------------------------------

[[nodiscard]] WeightedGraph path_graph(std::size_t n, double weight = 1.0);
[[nodiscard]] WeightedGraph cycle_graph(std::size_t n, double weight = 1.0);
[[nodiscard]] WeightedGraph star_graph(std::size_t n, double weight = 1.0);
[[nodiscard]] WeightedGraph complete_graph(std::size_t n, double weight = 1.0);

struct RandomGraphOptions {
    double extra_edge_probability = 0.2;  // chance of each non-tree pair
    double weight_min = 0.5;
    double weight_max = 1.5;
};

// Uniform random spanning tree (random attachment order) plus independent
// extra edges; always connected. Deterministic for a given seed.
[[nodiscard]] WeightedGraph random_connected_graph(std::size_t n, std::uint64_t seed,
                                                   const RandomGraphOptions& opts = {});

// Random graph without the connectivity guarantee (Erdos-Renyi G(n, p) with
// random weights); used to exercise disconnected cases.
[[nodiscard]] WeightedGraph random_graph(std::size_t n, double edge_probability,
                                         std::uint64_t seed,
                                         const RandomGraphOptions& opts = {});

// Rescales all weights so that algebraic_connectivity equals target_lambda2.
// Requires a connected graph and target_lambda2 > 0.
[[nodiscard]] WeightedGraph calibrate_lambda2(const WeightedGraph& g, double target_lambda2);

}  // namespace consensus_lab
