#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mfsir/error.hpp"
#include "mfsir/rng.hpp"

namespace mfsir {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A multi-label dataset: real feature matrix X (n x m) and binary label
/// matrix Y (n x q). Immutable by convention once loaded.
struct MultiLabelDataset {
    Matrix X;
    Matrix Y;
    std::vector<std::string> feature_names;
    std::vector<std::string> label_names;
    std::string name;

    Eigen::Index num_instances() const { return X.rows(); }
    Eigen::Index num_features() const { return X.cols(); }
    Eigen::Index num_labels() const { return Y.cols(); }
};

struct DatasetSummary {
    Eigen::Index num_instances = 0;
    Eigen::Index num_features = 0;
    Eigen::Index num_labels = 0;
    double label_cardinality = 0.0;
    double label_density = 0.0;
};

struct FoldAssignment {
    std::vector<int> fold_of_instance;
    int k = 0;
    std::uint64_t seed = 0;

    std::vector<int> train_indices(int fold) const {
        std::vector<int> idx;
        for (std::size_t i = 0; i < fold_of_instance.size(); ++i)
            if (fold_of_instance[i] != fold) idx.push_back(static_cast<int>(i));
        return idx;
    }
    std::vector<int> test_indices(int fold) const {
        std::vector<int> idx;
        for (std::size_t i = 0; i < fold_of_instance.size(); ++i)
            if (fold_of_instance[i] == fold) idx.push_back(static_cast<int>(i));
        return idx;
    }
};

inline void validate(const MultiLabelDataset& d) {
    if (d.X.rows() < 1 || d.X.cols() < 1 || d.Y.cols() < 1)
        throw data_error("dataset '" + d.name + "': needs n >= 1, m >= 1, q >= 1");
    if (d.X.rows() != d.Y.rows())
        throw data_error("dataset '" + d.name + "': X and Y row counts differ");
    for (Eigen::Index i = 0; i < d.Y.rows(); ++i)
        for (Eigen::Index j = 0; j < d.Y.cols(); ++j)
            if (d.Y(i, j) != 0.0 && d.Y(i, j) != 1.0)
                throw data_error("dataset '" + d.name + "': label entry not 0/1 at row " +
                                 std::to_string(i) + ", label " + std::to_string(j));
    if (static_cast<Eigen::Index>(d.feature_names.size()) != d.X.cols())
        throw data_error("dataset '" + d.name + "': feature name count mismatch");
    if (static_cast<Eigen::Index>(d.label_names.size()) != d.Y.cols())
        throw data_error("dataset '" + d.name + "': label name count mismatch");
    std::set<std::string> fset(d.feature_names.begin(), d.feature_names.end());
    if (fset.size() != d.feature_names.size())
        throw data_error("dataset '" + d.name + "': duplicate feature name");
    std::set<std::string> lset(d.label_names.begin(), d.label_names.end());
    if (lset.size() != d.label_names.size())
        throw data_error("dataset '" + d.name + "': duplicate label name");
}

inline DatasetSummary summarize(const MultiLabelDataset& d) {
    DatasetSummary s;
    s.num_instances = d.X.rows();
    s.num_features = d.X.cols();
    s.num_labels = d.Y.cols();
    s.label_cardinality = d.Y.sum() / static_cast<double>(d.Y.rows());
    s.label_density = s.label_cardinality / static_cast<double>(d.Y.cols());
    return s;
}

// Seeded shuffle followed by round-robin assignment; fold sizes differ by
// at most one. No stratification.
inline FoldAssignment kfold_split(Eigen::Index n, int k, std::uint64_t seed) {
    if (k < 2) throw usage_error("kfold_split: k must be >= 2");
    if (static_cast<Eigen::Index>(k) > n)
        throw usage_error("kfold_split: k exceeds the number of instances");
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    rng.shuffle(perm);
    FoldAssignment fa;
    fa.k = k;
    fa.seed = seed;
    fa.fold_of_instance.assign(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < perm.size(); ++i)
        fa.fold_of_instance[static_cast<std::size_t>(perm[i])] = static_cast<int>(i % k);
    return fa;
}

inline MultiLabelDataset select_features(const MultiLabelDataset& d,
                                         const std::vector<int>& indices) {
    if (indices.empty()) throw usage_error("select_features: empty index list");
    std::set<int> seen;
    for (int idx : indices) {
        if (idx < 0 || idx >= d.X.cols())
            throw usage_error("select_features: index " + std::to_string(idx) + " out of range");
        if (!seen.insert(idx).second)
            throw usage_error("select_features: duplicate index " + std::to_string(idx));
    }
    MultiLabelDataset out;
    out.name = d.name;
    out.Y = d.Y;
    out.label_names = d.label_names;
    out.X.resize(d.X.rows(), static_cast<Eigen::Index>(indices.size()));
    out.feature_names.reserve(indices.size());
    for (std::size_t c = 0; c < indices.size(); ++c) {
        out.X.col(static_cast<Eigen::Index>(c)) = d.X.col(indices[c]);
        out.feature_names.push_back(d.feature_names[static_cast<std::size_t>(indices[c])]);
    }
    return out;
}

inline MultiLabelDataset subset_rows(const MultiLabelDataset& d, const std::vector<int>& rows) {
    MultiLabelDataset out;
    out.name = d.name;
    out.feature_names = d.feature_names;
    out.label_names = d.label_names;
    out.X.resize(static_cast<Eigen::Index>(rows.size()), d.X.cols());
    out.Y.resize(static_cast<Eigen::Index>(rows.size()), d.Y.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.X.row(static_cast<Eigen::Index>(r)) = d.X.row(rows[r]);
        out.Y.row(static_cast<Eigen::Index>(r)) = d.Y.row(rows[r]);
    }
    return out;
}

/// Per-column standardization parameters fitted on a training split and
/// reusable on test splits. Population (1/n) variance; constant columns
/// map to all-zeros.
struct Standardizer {
    Vector mean;
    Vector inv_std;  // zero for constant columns

    Matrix apply(const Matrix& X) const {
        if (X.cols() != mean.size())
            throw usage_error("standardize: column count mismatch");
        return (X.rowwise() - mean.transpose()).array().rowwise() *
               inv_std.transpose().array();
    }

    MultiLabelDataset apply(const MultiLabelDataset& d) const {
        MultiLabelDataset out = d;
        out.X = apply(d.X);
        return out;
    }
};

inline Standardizer fit_standardizer(const Matrix& X) {
    Standardizer s;
    const double n = static_cast<double>(X.rows());
    s.mean = X.colwise().mean();
    Matrix centered = X.rowwise() - s.mean.transpose();
    Vector var = centered.array().square().colwise().sum() / n;
    s.inv_std.resize(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        s.inv_std(j) = var(j) > 0.0 ? 1.0 / std::sqrt(var(j)) : 0.0;
    return s;
}

inline std::pair<MultiLabelDataset, Standardizer> standardize(const MultiLabelDataset& d) {
    Standardizer s = fit_standardizer(d.X);
    return {s.apply(d), s};
}

}  // namespace mfsir
