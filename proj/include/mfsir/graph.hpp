#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <vector>

#include "mfsir/dataset.hpp"
#include "mfsir/error.hpp"

// Heat-kernel p-nearest-neighbor similarity graph and its Laplacian.
// S_ij = exp(-||x_i - x_j||^2 / lambda^2) when either point is among the
// other's p nearest (Euclidean, self excluded), 0 otherwise. L = Z - S with
// Z the diagonal degree matrix.

namespace mfsir {

struct GraphEdge {
    int i;
    int j;  // i < j
    double weight;
};

struct GraphConfig {
    int p = 5;
    double lambda = 0.0;  // <= 0 selects the adaptive width (mean kNN edge distance)
};

struct SimilarityGraph {
    Matrix S;
    int p = 0;
    double lambda = 0.0;
    std::vector<GraphEdge> edges;  // nonzero entries of S, each pair once
};

struct GraphLaplacian {
    Matrix L;
    Vector degrees;                // Z_ii
    std::vector<GraphEdge> edges;  // carried over from S; L*V and tr(V'LV)
                                   // are evaluated over these
};

namespace detail {

// squared Euclidean distances, clamped at zero against cancellation
inline Matrix pairwise_sq_dists(const Matrix& X) {
    Vector sq = X.rowwise().squaredNorm();
    Matrix d2 = sq.replicate(1, X.rows()) + sq.transpose().replicate(X.rows(), 1) -
                2.0 * (X * X.transpose());
    return d2.cwiseMax(0.0);
}

// p nearest neighbors per row; ties at the cutoff go to the lower index
inline std::vector<std::vector<int>> knn_lists(const Matrix& d2, int p) {
    const auto n = d2.rows();
    std::vector<std::vector<int>> nn(static_cast<std::size_t>(n));
    std::vector<int> order(static_cast<std::size_t>(n) - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        order.clear();
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) order.push_back(static_cast<int>(j));
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return d2(i, a) < d2(i, b); });
        nn[static_cast<std::size_t>(i)].assign(order.begin(), order.begin() + p);
    }
    return nn;
}

}  // namespace detail

/// Mean nonzero neighbor distance over the kNN edge set; falls back to 1
/// when every edge has length zero.
inline double adaptive_kernel_width(const Matrix& X, int p) {
    const auto n = X.rows();
    if (p < 1 || p >= n) throw usage_error("adaptive_kernel_width: need 1 <= p < n");
    Matrix d2 = detail::pairwise_sq_dists(X);
    auto nn = detail::knn_lists(d2, p);
    double sum = 0.0;
    long count = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (int j : nn[static_cast<std::size_t>(i)])
            if (d2(i, j) > 0.0) {
                sum += std::sqrt(d2(i, j));
                ++count;
            }
    return count > 0 ? sum / static_cast<double>(count) : 1.0;
}

inline SimilarityGraph build_similarity(const Matrix& X, int p, double lambda) {
    const auto n = X.rows();
    if (p < 1 || p >= n) throw usage_error("build_similarity: need 1 <= p < n");
    if (lambda <= 0.0) throw usage_error("build_similarity: lambda must be positive");
    if (n > 30000)
        std::cerr << "warning: dense similarity graph for n = " << n
                  << " instances needs " << (n * n * 8 / (1 << 20)) << " MiB\n";

    Matrix d2 = detail::pairwise_sq_dists(X);
    auto nn = detail::knn_lists(d2, p);

    SimilarityGraph g;
    g.p = p;
    g.lambda = lambda;
    g.S = Matrix::Zero(n, n);
    const double inv_l2 = 1.0 / (lambda * lambda);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int j : nn[static_cast<std::size_t>(i)]) {
            if (g.S(i, j) != 0.0) continue;  // edge already added from the other side
            const double w = std::exp(-d2(i, j) * inv_l2);
            if (w == 0.0) continue;
            g.S(i, j) = w;
            g.S(j, i) = w;
            g.edges.push_back({static_cast<int>(std::min<Eigen::Index>(i, j)),
                               static_cast<int>(std::max<Eigen::Index>(i, j)), w});
        }
    }
    return g;
}

inline SimilarityGraph build_similarity(const Matrix& X, const GraphConfig& cfg = {}) {
    const double lambda =
        cfg.lambda > 0.0 ? cfg.lambda : adaptive_kernel_width(X, cfg.p);
    return build_similarity(X, cfg.p, lambda);
}

inline GraphLaplacian build_laplacian(const SimilarityGraph& g) {
    GraphLaplacian lap;
    lap.degrees = g.S.rowwise().sum();
    lap.L = Matrix(lap.degrees.asDiagonal()) - g.S;
    lap.edges = g.edges;
    return lap;
}

/// Laplacian from an arbitrary symmetric zero-diagonal similarity matrix;
/// edges are recovered by scanning the upper triangle.
inline GraphLaplacian laplacian_from_dense(const Matrix& S) {
    if (S.rows() != S.cols()) throw usage_error("laplacian_from_dense: S must be square");
    GraphLaplacian lap;
    lap.degrees = S.rowwise().sum();
    lap.L = Matrix(lap.degrees.asDiagonal()) - S;
    for (Eigen::Index i = 0; i < S.rows(); ++i)
        for (Eigen::Index j = i + 1; j < S.cols(); ++j)
            if (S(i, j) != 0.0)
                lap.edges.push_back({static_cast<int>(i), static_cast<int>(j), S(i, j)});
    return lap;
}

inline GraphLaplacian zero_laplacian(Eigen::Index n) {
    GraphLaplacian lap;
    lap.L = Matrix::Zero(n, n);
    lap.degrees = Vector::Zero(n);
    return lap;
}

/// L*V evaluated over the edge set: degrees scale the rows, each edge
/// subtracts the neighbor's row. Equal to the dense product by construction.
inline Matrix laplacian_apply(const GraphLaplacian& lap, const Matrix& V) {
    if (V.rows() != lap.L.rows()) throw usage_error("laplacian_apply: row count mismatch");
    Matrix out = lap.degrees.asDiagonal() * V;
    for (const auto& e : lap.edges) {
        out.row(e.i) -= e.weight * V.row(e.j);
        out.row(e.j) -= e.weight * V.row(e.i);
    }
    return out;
}

/// tr(V' L V), evaluated as the weighted sum of squared row differences
/// over the edge set.
inline double manifold_term(const Matrix& V, const GraphLaplacian& lap) {
    if (V.rows() != lap.L.rows()) throw usage_error("manifold_term: row count mismatch");
    double acc = 0.0;
    for (const auto& e : lap.edges)
        acc += e.weight * (V.row(e.i) - V.row(e.j)).squaredNorm();
    return acc;
}

}  // namespace mfsir
