#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "mfsir/dataset.hpp"
#include "mfsir/rng.hpp"

// Deterministic synthetic datasets. They back the test suites and the demo
// workflow when no MULAN files are at hand; the music-emotions stand-in
// reproduces the well-known structural statistics of that benchmark
// (593 instances, 72 features, 6 labels, 1108 positive labels in total).

namespace mfsir::synth {

/// Labels derive from a 6-dimensional latent mood vector; features are noisy
/// views of single latent coordinates at varying signal strength, including
/// pure-noise columns. Per-label positive counts are exact by construction.
inline MultiLabelDataset make_emotions_like(std::uint64_t seed = 7) {
    constexpr int n = 593, m = 72, q = 6;
    constexpr int counts[q] = {173, 166, 264, 148, 168, 189};
    Rng rng(seed);

    Matrix latent(n, q);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < q; ++j) latent(i, j) = rng.uniform(-1.0, 1.0);

    MultiLabelDataset d;
    d.name = "emotions-like";
    d.label_names = {"amazed-suprised", "happy-pleased",  "relaxing-calm",
                     "quiet-still",     "sad-lonely",     "angry-aggresive"};
    d.Y = Matrix::Zero(n, q);
    std::vector<int> order(n);
    for (int j = 0; j < q; ++j) {
        std::vector<double> score(n);
        for (int i = 0; i < n; ++i)
            score[i] = latent(i, j) + 0.4 * latent(i, (j + 1) % q) -
                       0.25 * latent(i, (j + 2) % q) + 0.85 * rng.uniform(-1.0, 1.0);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return score[a] > score[b]; });
        for (int r = 0; r < counts[j]; ++r) d.Y(order[r], j) = 1.0;
    }

    // 12 features per latent coordinate, mixing coefficient tapering from
    // strong signal down to pure noise; per-feature scale varies so that
    // standardization is not a no-op
    d.X.resize(n, m);
    d.feature_names.reserve(m);
    for (int k = 0; k < m; ++k) {
        const int g = k / 12;
        const double c = std::max(0.0, 1.0 - 0.1 * (k % 12));
        const double scale = 1.0 + 0.15 * (k % 7);
        for (int i = 0; i < n; ++i)
            d.X(i, k) = scale * (c * latent(i, g) + (1.05 - c) * rng.uniform(-1.0, 1.0));
        char buf[16];
        std::snprintf(buf, sizeof(buf), "f%02d", k);
        d.feature_names.emplace_back(buf);
    }
    return d;
}

struct SparseRecoveryDataset {
    MultiLabelDataset data;
    std::vector<int> informative;  // indices of the features the labels depend on
};

/// Labels are thresholded signed combinations of a small known subset of
/// feature columns; every other column is independent noise.
inline SparseRecoveryDataset make_sparse_recovery(std::uint64_t seed, int n = 100,
                                                  int m = 50, int q = 4) {
    SparseRecoveryDataset out;
    out.informative = {4, 13, 27, 35, 49};
    if (m < 50) out.informative = {0, 1, 2, 3, 4};  // tiny-m fallback
    const int s = static_cast<int>(out.informative.size());

    Rng rng(seed);
    MultiLabelDataset& d = out.data;
    d.name = "sparse-recovery";
    d.X.resize(n, m);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < m; ++k) d.X(i, k) = rng.uniform(-1.0, 1.0);

    // fixed signed mixing weights, one row per label
    const double A[4][5] = {{1.0, 0.8, -0.6, 0.5, -0.4},
                            {-0.7, 1.0, 0.6, -0.5, 0.8},
                            {0.5, -0.6, 1.0, 0.7, 0.4},
                            {0.6, 0.5, -0.8, -1.0, 0.7}};
    d.Y = Matrix::Zero(n, q);
    std::vector<int> order(n);
    for (int j = 0; j < q; ++j) {
        std::vector<double> score(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < s; ++a)
                score[i] += A[j % 4][a] * d.X(i, out.informative[a]);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int x, int y) { return score[x] > score[y]; });
        for (int r = 0; r < (2 * n) / 5; ++r) d.Y(order[r], j) = 1.0;  // 40% positive
    }

    d.feature_names.reserve(m);
    for (int k = 0; k < m; ++k) d.feature_names.push_back("x" + std::to_string(k));
    for (int j = 0; j < q; ++j) d.label_names.push_back("y" + std::to_string(j));
    return out;
}

/// Two well-separated Gaussian-ish blobs with complementary label vectors.
inline MultiLabelDataset make_two_cluster(int n = 24, int dim = 3,
                                          std::uint64_t seed = 3) {
    Rng rng(seed);
    MultiLabelDataset d;
    d.name = "two-cluster";
    d.X.resize(n, dim);
    d.Y.resize(n, 2);
    for (int i = 0; i < n; ++i) {
        const double center = i % 2 == 0 ? 1.5 : -1.5;
        for (int k = 0; k < dim; ++k) d.X(i, k) = center + 0.2 * rng.uniform(-1.0, 1.0);
        d.Y(i, 0) = i % 2 == 0 ? 1.0 : 0.0;
        d.Y(i, 1) = i % 2 == 0 ? 0.0 : 1.0;
    }
    for (int k = 0; k < dim; ++k) d.feature_names.push_back("x" + std::to_string(k));
    d.label_names = {"a", "b"};
    return d;
}

/// Single-label dataset whose first feature column equals the label column;
/// all other features are noise.
inline MultiLabelDataset make_single_label_probe(int n = 80, int m = 8,
                                                 std::uint64_t seed = 11) {
    Rng rng(seed);
    MultiLabelDataset d;
    d.name = "single-label-probe";
    d.X.resize(n, m);
    d.Y.resize(n, 1);
    for (int i = 0; i < n; ++i) {
        const double y = rng.uniform01() < 0.5 ? 0.0 : 1.0;
        d.Y(i, 0) = y;
        d.X(i, 0) = y;
        for (int k = 1; k < m; ++k) d.X(i, k) = rng.uniform(-1.0, 1.0);
    }
    // guard against a degenerate all-equal label draw
    if (d.Y.sum() == 0.0) { d.Y(0, 0) = 1.0; d.X(0, 0) = 1.0; }
    if (d.Y.sum() == static_cast<double>(n)) { d.Y(0, 0) = 0.0; d.X(0, 0) = 0.0; }
    for (int k = 0; k < m; ++k) d.feature_names.push_back("x" + std::to_string(k));
    d.label_names = {"y"};
    return d;
}

}  // namespace mfsir::synth
