#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "mfsir/error.hpp"
#include "mfsir/graph.hpp"
#include "mfsir/rng.hpp"

// The estimator: W = G (.) H reparameterizes the feature coefficient matrix
// so plain gradient descent regularizes implicitly, while Y ~ V B embeds the
// labels in a nonnegative latent space tied to the instance manifold through
// tr(V' L V). Minimized objective:
//
//   || X (G (.) H) - V ||_F^2  +  alpha || Y - V B ||_F^2  +  beta tr(V' L V)
//
// with G, H in R^{m x l}, V in R^{n x l} (nonnegative), B in R^{l x q}
// (nonnegative). Updates run G -> H -> V -> B, each against the current
// values of the others; V and B are clipped at zero after their steps.

namespace mfsir {

enum class InitMode { SparseNonneg, Signed };

inline InitMode parse_init_mode(const std::string& s) {
    if (s == "sparse_nonneg") return InitMode::SparseNonneg;
    if (s == "signed") return InitMode::Signed;
    throw usage_error("unknown init mode '" + s + "' (expected sparse_nonneg or signed)");
}

inline std::string to_string(InitMode m) {
    return m == InitMode::SparseNonneg ? "sparse_nonneg" : "signed";
}

struct FitConfig {
    double alpha = 1.0;
    double beta = 1.0;
    double eta = 1e-4;
    double varpi = 1e-5;   // init perturbation scale
    int latent_dim = 0;    // 0 = auto: max(1, round(0.4 q)), clipped below q
    int t_max = 200;
    double tol = 1e-5;     // relative-change stop threshold
    std::uint64_t seed = 0;
    InitMode init_mode = InitMode::SparseNonneg;

    int resolve_latent_dim(Eigen::Index q) const {
        if (q < 1) throw usage_error("fit: need q >= 1");
        if (latent_dim == 0) {
            if (q == 1) return 1;
            int l = static_cast<int>(std::lround(0.4 * static_cast<double>(q)));
            return std::clamp(l, 1, static_cast<int>(q) - 1);
        }
        if (q == 1) {
            if (latent_dim != 1) throw usage_error("fit: latent_dim must be 1 when q == 1");
            return 1;
        }
        if (latent_dim < 1 || latent_dim >= q)
            throw usage_error("fit: latent_dim must satisfy 1 <= l < q");
        return latent_dim;
    }

    void validate() const {
        if (alpha <= 0.0) throw usage_error("fit: alpha must be positive");
        if (beta < 0.0) throw usage_error("fit: beta must be nonnegative");
        if (eta <= 0.0) throw usage_error("fit: eta must be positive");
        if (varpi <= 0.0) throw usage_error("fit: varpi must be positive");
        if (t_max < 0) throw usage_error("fit: t_max must be nonnegative");
        if (tol <= 0.0) throw usage_error("fit: tol must be positive");
    }
};

struct FactorModel {
    Matrix G;  // m x l
    Matrix H;  // m x l
    Matrix V;  // n x l, nonnegative after every update
    Matrix B;  // l x q, nonnegative after every update
    std::vector<double> objective_history;  // zeta^0 .. zeta^t
    int iterations_run = 0;
    bool converged = false;
};

struct FeatureRanking {
    std::vector<int> order;     // feature indices, descending score
    std::vector<double> scores; // score per feature index
};

inline double frobenius_norm_sq(const Matrix& A) { return A.squaredNorm(); }

inline Matrix project_nonneg(const Matrix& D) { return D.cwiseMax(0.0); }

namespace detail {

inline void check_shapes(const Matrix& X, const Matrix& Y, const GraphLaplacian& L,
                         const Matrix& G, const Matrix& H, const Matrix& V,
                         const Matrix& B) {
    const auto n = X.rows(), m = X.cols();
    const auto l = G.cols(), q = Y.cols();
    if (H.rows() != m || G.rows() != m || H.cols() != l)
        throw usage_error("shape mismatch: G and H must both be m x l");
    if (V.rows() != n || V.cols() != l)
        throw usage_error("shape mismatch: V must be n x l");
    if (B.rows() != l || B.cols() != q)
        throw usage_error("shape mismatch: B must be l x q");
    if (Y.rows() != n) throw usage_error("shape mismatch: Y must have n rows");
    if (L.L.rows() != n) throw usage_error("shape mismatch: L must be n x n");
}

}  // namespace detail

inline double objective(const Matrix& X, const Matrix& Y, const GraphLaplacian& L,
                        const Matrix& G, const Matrix& H, const Matrix& V,
                        const Matrix& B, double alpha, double beta) {
    detail::check_shapes(X, Y, L, G, H, V, B);
    const Matrix XW = X * G.cwiseProduct(H);
    double value = (XW - V).squaredNorm() + alpha * (Y - V * B).squaredNorm();
    if (beta != 0.0) value += beta * manifold_term(V, L);
    return value;
}

struct Gradients {
    Matrix G, H, V, B;
};

inline Gradients gradients(const Matrix& X, const Matrix& Y, const GraphLaplacian& L,
                           const Matrix& G, const Matrix& H, const Matrix& V,
                           const Matrix& B, double alpha, double beta) {
    detail::check_shapes(X, Y, L, G, H, V, B);
    Gradients g;
    const Matrix XW = X * G.cwiseProduct(H);
    const Matrix K = 2.0 * (X.transpose() * (XW - V));
    g.G = H.cwiseProduct(K);
    g.H = G.cwiseProduct(K);
    const Matrix R = V * B - Y;
    g.V = 2.0 * ((V - XW) + alpha * (R * B.transpose()));
    if (beta != 0.0) g.V += 2.0 * beta * laplacian_apply(L, V);
    g.B = 2.0 * alpha * (V.transpose() * R);
    return g;
}

inline FactorModel init_model(const FitConfig& cfg, Eigen::Index m, Eigen::Index q,
                              Eigen::Index n, int l) {
    cfg.validate();
    Rng rng(cfg.seed);
    FactorModel model;
    auto fill = [&](Matrix& M, Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
        M.resize(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = rng.uniform(lo, hi);
    };
    const double w = cfg.varpi;
    if (cfg.init_mode == InitMode::SparseNonneg) {
        fill(model.G, m, l, 0.0, w);
        fill(model.H, m, l, -w, w);
        fill(model.V, n, l, -w, w);
        fill(model.B, l, q, -w, w);
        model.V = project_nonneg(model.V);
        model.B = project_nonneg(model.B);
    } else {
        fill(model.G, m, l, -w, w);
        fill(model.H, m, l, -w, w);
        fill(model.V, n, l, -w, w);
        fill(model.B, l, q, -w, w);
    }
    return model;
}

/// One alternating pass G -> H -> V -> B; gradients for each block use the
/// already-updated values of the previous blocks. Appends the post-update
/// objective to the history. Throws numeric_error when the objective stops
/// being finite (step size too large).
inline void step(FactorModel& model, const Matrix& X, const Matrix& Y,
                 const GraphLaplacian& L, const FitConfig& cfg) {
    detail::check_shapes(X, Y, L, model.G, model.H, model.V, model.B);
    const double eta = cfg.eta, alpha = cfg.alpha, beta = cfg.beta;

    Matrix XW = X * model.G.cwiseProduct(model.H);
    Matrix K = 2.0 * (X.transpose() * (XW - model.V));
    model.G -= eta * model.H.cwiseProduct(K);

    XW.noalias() = X * model.G.cwiseProduct(model.H);
    K.noalias() = 2.0 * (X.transpose() * (XW - model.V));
    model.H -= eta * model.G.cwiseProduct(K);

    XW.noalias() = X * model.G.cwiseProduct(model.H);
    Matrix R = model.V * model.B - Y;
    Matrix grad_v = 2.0 * ((model.V - XW) + alpha * (R * model.B.transpose()));
    if (beta != 0.0) grad_v += 2.0 * beta * laplacian_apply(L, model.V);
    model.V = project_nonneg(model.V - eta * grad_v);

    R.noalias() = model.V * model.B - Y;
    model.B = project_nonneg(model.B - eta * (2.0 * alpha * (model.V.transpose() * R)));

    double value = (XW - model.V).squaredNorm() +
                   alpha * (Y - model.V * model.B).squaredNorm();
    if (beta != 0.0) value += beta * manifold_term(model.V, L);
    if (!std::isfinite(value))
        throw numeric_error("objective diverged at iteration " +
                            std::to_string(model.iterations_run + 1) +
                            " (eta too large?)");
    model.objective_history.push_back(value);
    ++model.iterations_run;
}

/// Row scores are the l2 norms of G (.) H; descending order, ties broken by
/// ascending feature index.
inline FeatureRanking rank_features(const Matrix& G, const Matrix& H) {
    if (G.rows() != H.rows() || G.cols() != H.cols())
        throw usage_error("rank_features: G and H shapes differ");
    const Matrix W = G.cwiseProduct(H);
    FeatureRanking r;
    r.scores.resize(static_cast<std::size_t>(W.rows()));
    for (Eigen::Index j = 0; j < W.rows(); ++j)
        r.scores[static_cast<std::size_t>(j)] = W.row(j).norm();
    r.order.resize(r.scores.size());
    std::iota(r.order.begin(), r.order.end(), 0);
    std::stable_sort(r.order.begin(), r.order.end(), [&](int a, int b) {
        return r.scores[static_cast<std::size_t>(a)] > r.scores[static_cast<std::size_t>(b)];
    });
    return r;
}

/// Fraction of rows of W whose l2 norm is at or below the threshold.
inline double sparsity_fraction(const Matrix& W, double threshold) {
    if (threshold < 0.0) throw usage_error("sparsity_fraction: threshold must be nonnegative");
    if (W.rows() == 0) return 0.0;
    Eigen::Index count = 0;
    for (Eigen::Index j = 0; j < W.rows(); ++j)
        if (W.row(j).norm() <= threshold) ++count;
    return static_cast<double>(count) / static_cast<double>(W.rows());
}

struct FitResult {
    FactorModel model;
    FeatureRanking ranking;
};

constexpr double kStopDenominatorFloor = 1e-12;

inline FitResult fit_with_laplacian(const Matrix& X, const Matrix& Y,
                                    const GraphLaplacian& L, const FitConfig& cfg) {
    cfg.validate();
    const int l = cfg.resolve_latent_dim(Y.cols());
    FactorModel model = init_model(cfg, X.cols(), Y.cols(), X.rows(), l);
    model.objective_history.push_back(
        objective(X, Y, L, model.G, model.H, model.V, model.B, cfg.alpha, cfg.beta));

    for (int t = 0; t < cfg.t_max; ++t) {
        step(model, X, Y, L, cfg);
        const double prev = model.objective_history[model.objective_history.size() - 2];
        const double cur = model.objective_history.back();
        if (std::abs(cur - prev) / std::max(prev, kStopDenominatorFloor) <= cfg.tol) {
            model.converged = true;
            break;
        }
    }
    FeatureRanking ranking = rank_features(model.G, model.H);
    return {std::move(model), std::move(ranking)};
}

/// Full estimator entry point; builds the p-NN heat-kernel graph on X
/// internally. The graph degenerates to empty when n == 1 or beta == 0.
inline FitResult fit(const Matrix& X, const Matrix& Y, const FitConfig& cfg,
                     const GraphConfig& graph_cfg = {}) {
    if (X.rows() < 1 || X.cols() < 1 || Y.cols() < 1)
        throw usage_error("fit: need n, m, q >= 1");
    if (Y.rows() != X.rows()) throw usage_error("fit: X and Y row counts differ");
    GraphLaplacian L;
    if (cfg.beta != 0.0 && X.rows() > 1) {
        GraphConfig gc = graph_cfg;
        gc.p = std::min<int>(gc.p, static_cast<int>(X.rows()) - 1);
        L = build_laplacian(build_similarity(X, gc));
    } else {
        L = zero_laplacian(X.rows());
    }
    return fit_with_laplacian(X, Y, L, cfg);
}

}  // namespace mfsir
