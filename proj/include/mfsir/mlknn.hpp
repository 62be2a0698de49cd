#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <vector>

#include "mfsir/dataset.hpp"
#include "mfsir/error.hpp"

// ML-kNN: per-label Bayesian prediction from k-nearest-neighbor label
// counts. Priors and the (k+1)-bin conditional count tables are estimated
// on the training set with Laplace smoothing s; prediction applies the MAP
// rule and also yields the posterior scores used by ranking-based metrics.

namespace mfsir {

struct MlknnModel {
    int k = 10;
    double s = 1.0;
    Vector priors;    // P(H_j = 1)
    Matrix cond;      // q x (k+1), P(E_c | H_j = 1)
    Matrix cond_neg;  // q x (k+1), P(E_c | H_j = 0)
    Matrix train_X;
    Matrix train_Y;
};

struct MlknnPrediction {
    Matrix scores;       // n_test x q, posterior P(H=1 | E_c) in [0,1]
    Matrix predictions;  // n_test x q, binary; score > 0.5 predicts 1
};

namespace detail {

// indices of the k training rows nearest to `point`; ties by lower index
inline std::vector<int> knearest(const Matrix& train_X, const Eigen::RowVectorXd& point,
                                 int k, int exclude = -1) {
    const auto n = train_X.rows();
    std::vector<double> d2(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        d2[static_cast<std::size_t>(i)] = (train_X.row(i) - point).squaredNorm();
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        if (static_cast<int>(i) != exclude) order.push_back(static_cast<int>(i));
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return d2[static_cast<std::size_t>(a)] < d2[static_cast<std::size_t>(b)];
    });
    order.resize(static_cast<std::size_t>(k));
    return order;
}

}  // namespace detail

inline MlknnModel mlknn_fit(const MultiLabelDataset& train, int k, double s = 1.0) {
    const auto n = train.X.rows();
    const auto q = train.Y.cols();
    if (k < 1) throw usage_error("mlknn_fit: k must be >= 1");
    if (k >= n) throw usage_error("mlknn_fit: k must be smaller than the training set");
    if (s < 0.0) throw usage_error("mlknn_fit: smoothing must be nonnegative");

    MlknnModel model;
    model.k = k;
    model.s = s;
    model.train_X = train.X;
    model.train_Y = train.Y;

    model.priors.resize(q);
    for (Eigen::Index j = 0; j < q; ++j)
        model.priors(j) = (s + train.Y.col(j).sum()) / (2.0 * s + static_cast<double>(n));

    // neighbor label counts per training instance, self excluded
    Eigen::MatrixXi counts(n, q);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto nbrs = detail::knearest(train.X, train.X.row(i), k, static_cast<int>(i));
        for (Eigen::Index j = 0; j < q; ++j) {
            int c = 0;
            for (int nb : nbrs) c += train.Y(nb, j) != 0.0 ? 1 : 0;
            counts(i, j) = c;
        }
    }

    model.cond = Matrix::Zero(q, k + 1);
    model.cond_neg = Matrix::Zero(q, k + 1);
    for (Eigen::Index j = 0; j < q; ++j) {
        Vector pos_bins = Vector::Zero(k + 1);
        Vector neg_bins = Vector::Zero(k + 1);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (train.Y(i, j) != 0.0)
                pos_bins(counts(i, j)) += 1.0;
            else
                neg_bins(counts(i, j)) += 1.0;
        }
        const double pos_total = s * (k + 1) + pos_bins.sum();
        const double neg_total = s * (k + 1) + neg_bins.sum();
        for (int c = 0; c <= k; ++c) {
            model.cond(j, c) = pos_total > 0.0 ? (s + pos_bins(c)) / pos_total : 0.0;
            model.cond_neg(j, c) = neg_total > 0.0 ? (s + neg_bins(c)) / neg_total : 0.0;
        }
    }
    return model;
}

inline MlknnPrediction mlknn_predict(const MlknnModel& model, const Matrix& X_test) {
    if (X_test.cols() != model.train_X.cols())
        throw usage_error("mlknn_predict: feature dimension mismatch with training data");
    const auto n = X_test.rows();
    const auto q = model.train_Y.cols();
    MlknnPrediction out;
    out.scores.resize(n, q);
    out.predictions.resize(n, q);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto nbrs = detail::knearest(model.train_X, X_test.row(i), model.k);
        for (Eigen::Index j = 0; j < q; ++j) {
            int c = 0;
            for (int nb : nbrs) c += model.train_Y(nb, j) != 0.0 ? 1 : 0;
            const double p1 = model.priors(j) * model.cond(j, c);
            const double p0 = (1.0 - model.priors(j)) * model.cond_neg(j, c);
            const double score = (p1 + p0) > 0.0 ? p1 / (p1 + p0) : 0.0;
            out.scores(i, j) = score;
            out.predictions(i, j) = score > 0.5 ? 1.0 : 0.0;
        }
    }
    return out;
}

}  // namespace mfsir
