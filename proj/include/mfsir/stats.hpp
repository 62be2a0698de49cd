#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "mfsir/dataset.hpp"
#include "mfsir/error.hpp"

// Friedman rank test across datasets plus the Nemenyi post-hoc critical
// distance. Ranks use mid-rank tie averaging. The q_0.05 table is the
// studentized range statistic divided by sqrt(2), for 2..10 algorithms.

namespace mfsir {

struct MetricTable {
    Matrix values;  // theta datasets x gamma algorithms
    bool higher_is_better = false;
    std::vector<std::string> algorithm_names;
    std::vector<std::string> dataset_names;

    void validate() const {
        if (values.rows() < 2 || values.cols() < 2)
            throw data_error("metric table needs at least 2 datasets and 2 algorithms");
        if (!values.allFinite()) throw data_error("metric table has non-finite values");
        if (!algorithm_names.empty() &&
            static_cast<Eigen::Index>(algorithm_names.size()) != values.cols())
            throw data_error("metric table: algorithm name count mismatch");
        if (!dataset_names.empty() &&
            static_cast<Eigen::Index>(dataset_names.size()) != values.rows())
            throw data_error("metric table: dataset name count mismatch");
    }
};

struct FriedmanResult {
    std::vector<double> avg_ranks;  // R_j per algorithm
    double chi2_f = 0.0;
    double f_f = 0.0;
    int df1 = 0;  // gamma - 1
    int df2 = 0;  // (gamma - 1)(theta - 1)
    // true when the ranks separate perfectly and the F statistic's
    // denominator theta*(gamma-1) - chi2 vanishes; f_f is +inf then
    bool perfect_separation = false;
};

inline std::vector<double> average_ranks(const MetricTable& t) {
    t.validate();
    const auto theta = t.values.rows(), gamma = t.values.cols();
    std::vector<double> ranks(static_cast<std::size_t>(gamma), 0.0);
    std::vector<int> order(static_cast<std::size_t>(gamma));
    for (Eigen::Index d = 0; d < theta; ++d) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return t.higher_is_better ? t.values(d, a) > t.values(d, b)
                                      : t.values(d, a) < t.values(d, b);
        });
        // mid-rank averaging over groups of equal values
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j + 1 < order.size() &&
                   t.values(d, order[j + 1]) == t.values(d, order[i]))
                ++j;
            const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k)
                ranks[static_cast<std::size_t>(order[k])] += mid;
            i = j + 1;
        }
    }
    for (auto& r : ranks) r /= static_cast<double>(theta);
    return ranks;
}

inline FriedmanResult friedman(const MetricTable& t) {
    t.validate();
    const double theta = static_cast<double>(t.values.rows());
    const double gamma = static_cast<double>(t.values.cols());
    FriedmanResult res;
    res.avg_ranks = average_ranks(t);
    double sum_sq = 0.0;
    for (double r : res.avg_ranks) sum_sq += r * r;
    res.chi2_f = 12.0 * theta / (gamma * (gamma + 1.0)) *
                 (sum_sq - gamma * (gamma + 1.0) * (gamma + 1.0) / 4.0);
    res.df1 = static_cast<int>(gamma) - 1;
    res.df2 = (static_cast<int>(gamma) - 1) * (static_cast<int>(theta) - 1);
    const double denom = theta * (gamma - 1.0) - res.chi2_f;
    if (std::abs(denom) < 1e-9) {
        res.perfect_separation = true;
        res.f_f = std::numeric_limits<double>::infinity();
    } else {
        res.f_f = (theta - 1.0) * res.chi2_f / denom;
    }
    return res;
}

/// q_0.05 for the Nemenyi test, indexed by the number of algorithms.
inline double nemenyi_q05(int gamma) {
    static constexpr double table[] = {1.960, 2.343, 2.569, 2.728, 2.850,
                                       2.949, 3.031, 3.102, 3.164};
    if (gamma < 2 || gamma > 10)
        throw usage_error("nemenyi q table covers 2..10 algorithms; pass q_alpha explicitly");
    return table[gamma - 2];
}

inline double nemenyi_cd(int gamma, int theta, double q_alpha) {
    if (gamma < 2) throw usage_error("nemenyi_cd: need at least 2 algorithms");
    if (theta < 1) throw usage_error("nemenyi_cd: need at least 1 dataset");
    if (q_alpha <= 0.0) throw usage_error("nemenyi_cd: q_alpha must be positive");
    return q_alpha * std::sqrt(static_cast<double>(gamma) * (gamma + 1.0) /
                               (6.0 * static_cast<double>(theta)));
}

inline double nemenyi_cd(int gamma, int theta) {
    return nemenyi_cd(gamma, theta, nemenyi_q05(gamma));
}

/// (i, j) is true when |R_i - R_j| >= cd. Symmetric with a false diagonal.
inline std::vector<std::vector<bool>> pairwise_significance(
    const std::vector<double>& ranks, double cd) {
    const std::size_t g = ranks.size();
    std::vector<std::vector<bool>> sig(g, std::vector<bool>(g, false));
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = i + 1; j < g; ++j) {
            const bool s = std::abs(ranks[i] - ranks[j]) >= cd;
            sig[i][j] = s;
            sig[j][i] = s;
        }
    return sig;
}

}  // namespace mfsir
