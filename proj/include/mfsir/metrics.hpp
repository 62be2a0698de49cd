#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "mfsir/dataset.hpp"
#include "mfsir/error.hpp"

// Multi-label evaluation metrics. Ranking loss counts ties against the
// scorer (<=), macro AUC counts ties for it (>=); both follow the printed
// definitions. Instances with an empty relevant or irrelevant set, and
// labels without both positives and negatives, are skipped and counted
// rather than scored.

namespace mfsir {

struct EvaluationResult {
    double hamming_loss = 0.0;
    double ranking_loss = 0.0;
    double macro_auc = 0.0;
    double macro_f1 = 0.0;
    int skipped_instances = 0;  // degenerate instances in ranking loss
    int skipped_labels = 0;     // degenerate labels in macro AUC
};

namespace detail {

inline void check_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw usage_error(std::string(what) + ": shape mismatch");
}

}  // namespace detail

inline double hamming_loss(const Matrix& pred, const Matrix& truth) {
    detail::check_same_shape(pred, truth, "hamming_loss");
    const auto n = pred.rows(), q = pred.cols();
    long wrong = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < q; ++j)
            if ((pred(i, j) != 0.0) != (truth(i, j) != 0.0)) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(n * q);
}

inline double ranking_loss(const Matrix& scores, const Matrix& truth,
                           int* skipped_out = nullptr) {
    detail::check_same_shape(scores, truth, "ranking_loss");
    const auto n = scores.rows(), q = scores.cols();
    double sum = 0.0;
    int counted = 0, skipped = 0;
    std::vector<double> pos;
    for (Eigen::Index i = 0; i < n; ++i) {
        pos.clear();
        std::vector<double> neg;
        for (Eigen::Index j = 0; j < q; ++j)
            (truth(i, j) != 0.0 ? pos : neg).push_back(scores(i, j));
        if (pos.empty() || neg.empty()) {
            ++skipped;
            continue;
        }
        std::sort(pos.begin(), pos.end());
        long bad = 0;  // pairs with f(relevant) <= f(irrelevant)
        for (double t : neg)
            bad += std::upper_bound(pos.begin(), pos.end(), t) - pos.begin();
        sum += static_cast<double>(bad) / (static_cast<double>(pos.size()) * neg.size());
        ++counted;
    }
    if (skipped_out) *skipped_out = skipped;
    if (counted == 0)
        throw data_error("ranking_loss: every instance has an empty relevant or irrelevant set");
    return sum / counted;
}

inline double macro_auc(const Matrix& scores, const Matrix& truth,
                        int* skipped_out = nullptr) {
    detail::check_same_shape(scores, truth, "macro_auc");
    const auto n = scores.rows(), q = scores.cols();
    double sum = 0.0;
    int counted = 0, skipped = 0;
    for (Eigen::Index j = 0; j < q; ++j) {
        std::vector<double> pos, neg;
        for (Eigen::Index i = 0; i < n; ++i)
            (truth(i, j) != 0.0 ? pos : neg).push_back(scores(i, j));
        if (pos.empty() || neg.empty()) {
            ++skipped;
            continue;
        }
        std::sort(neg.begin(), neg.end());
        long good = 0;  // pairs with f(positive) >= f(negative)
        for (double p : pos)
            good += std::upper_bound(neg.begin(), neg.end(), p) - neg.begin();
        sum += static_cast<double>(good) / (static_cast<double>(pos.size()) * neg.size());
        ++counted;
    }
    if (skipped_out) *skipped_out = skipped;
    if (counted == 0)
        throw data_error("macro_auc: no label has both positive and negative instances");
    return sum / counted;
}

inline double macro_f1(const Matrix& pred, const Matrix& truth) {
    detail::check_same_shape(pred, truth, "macro_f1");
    const auto n = pred.rows(), q = pred.cols();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < q; ++j) {
        long tp = 0, fp = 0, fn = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const bool p = pred(i, j) != 0.0, t = truth(i, j) != 0.0;
            tp += p && t;
            fp += p && !t;
            fn += !p && t;
        }
        const long denom = 2 * tp + fp + fn;
        sum += denom > 0 ? 2.0 * static_cast<double>(tp) / static_cast<double>(denom) : 0.0;
    }
    return sum / static_cast<double>(q);
}

inline EvaluationResult evaluate_all(const Matrix& pred, const Matrix& scores,
                                     const Matrix& truth) {
    EvaluationResult r;
    r.hamming_loss = hamming_loss(pred, truth);
    r.ranking_loss = ranking_loss(scores, truth, &r.skipped_instances);
    r.macro_auc = macro_auc(scores, truth, &r.skipped_labels);
    r.macro_f1 = macro_f1(pred, truth);
    return r;
}

}  // namespace mfsir
