#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mfsir/arff.hpp"
#include "mfsir/csv.hpp"
#include "mfsir/dataset.hpp"
#include "mfsir/error.hpp"
#include "mfsir/estimator.hpp"
#include "mfsir/metrics.hpp"
#include "mfsir/mlknn.hpp"
#include "mfsir/rng.hpp"
#include "mfsir/stats.hpp"
#include "mfsir/svg.hpp"

// The benchmark harness: cross-validated feature-fraction sweeps with the
// estimator and two reference rankers, result persistence as CSV, and the
// Friedman/Nemenyi comparison over a results file.
//
// Determinism contract: every task draws its RNG stream from
// seed ^ fnv1a(task id), so results do not depend on execution order, and
// rerunning a config reproduces results.csv byte for byte (timing aside).

namespace mfsir {

struct DatasetSpec {
    std::string arff;
    std::string xml;
    std::string name;  // optional; defaults to the @relation name
};

struct ExperimentConfig {
    std::vector<DatasetSpec> datasets;
    std::vector<std::string> algorithms{"mfsir", "random", "variance"};
    std::vector<double> fractions{0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
    int cv_folds = 5;
    std::vector<std::uint64_t> seeds{1};
    int knn_k = 10;
    double knn_s = 1.0;
    GraphConfig graph;
    FitConfig fit;  // fit.seed is replaced by the per-task stream
    std::vector<double> alpha_sweep;  // optional sensitivity sweeps
    std::vector<double> beta_sweep;
    bool standardize = true;
    bool plots = false;
    std::string out_dir = "mfsir-out";

    void validate() const {
        if (datasets.empty()) throw usage_error("config: no datasets given");
        if (cv_folds < 2) throw usage_error("config: folds must be >= 2");
        if (seeds.empty()) throw usage_error("config: need at least one seed");
        if (fractions.empty()) throw usage_error("config: need at least one fraction");
        for (std::size_t i = 0; i < fractions.size(); ++i) {
            if (fractions[i] <= 0.0 || fractions[i] > 1.0)
                throw usage_error("config: fractions must lie in (0, 1]");
            if (i > 0 && fractions[i] <= fractions[i - 1])
                throw usage_error("config: fractions must be strictly increasing");
        }
        if (knn_k < 1) throw usage_error("config: knn-k must be >= 1");
        if (knn_s < 0.0) throw usage_error("config: knn-s must be nonnegative");
        fit.validate();
    }
};

struct RunRecord {
    std::string dataset;
    std::string algorithm;
    double fraction = 0.0;
    int fold = 0;
    std::uint64_t seed = 0;
    EvaluationResult metrics;
    double seconds = 0.0;
    int iterations = 0;          // estimator fits only
    double final_objective = 0.0;
    bool has_fit_info = false;
};

struct FailureRecord {
    std::string dataset;
    std::string algorithm;
    int fold = 0;
    std::uint64_t seed = 0;
    std::string message;
};

struct ConvergenceTrace {
    std::string dataset;
    std::uint64_t seed = 0;
    int fold = 0;
    std::vector<double> objective_history;
};

struct SensitivityRecord {
    std::string param;  // "alpha" or "beta"
    double value = 0.0;
    std::string dataset;
    double fraction = 0.0;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
};

struct ExperimentResult {
    std::vector<RunRecord> records;
    std::vector<FailureRecord> failures;
    std::vector<ConvergenceTrace> traces;
    std::vector<SensitivityRecord> sensitivity;
};

/// ceil(fraction * m) selected features, at least 1; the epsilon guards the
/// ceiling against binary rounding of products like 0.25 * 72.
inline int selected_feature_count(double fraction, Eigen::Index m) {
    const double raw = fraction * static_cast<double>(m);
    return std::max(1, static_cast<int>(std::ceil(raw - 1e-9)));
}

enum class BaselineMethod { Random, Variance };

inline FeatureRanking baseline_rank(BaselineMethod method, const MultiLabelDataset& train,
                                    std::uint64_t seed = 0) {
    const auto m = train.X.cols();
    FeatureRanking r;
    r.order.resize(static_cast<std::size_t>(m));
    r.scores.resize(static_cast<std::size_t>(m));
    if (method == BaselineMethod::Random) {
        std::iota(r.order.begin(), r.order.end(), 0);
        Rng rng(seed);
        rng.shuffle(r.order);
        for (std::size_t pos = 0; pos < r.order.size(); ++pos)
            r.scores[static_cast<std::size_t>(r.order[pos])] =
                static_cast<double>(m - static_cast<Eigen::Index>(pos));
    } else {
        const double n = static_cast<double>(train.X.rows());
        for (Eigen::Index j = 0; j < m; ++j) {
            const double mean = train.X.col(j).mean();
            const double var = (train.X.col(j).array() - mean).square().sum() / n;
            // quantize so that float noise on equal-variance columns (for
            // instance after standardization) cannot scramble the tie-break
            r.scores[static_cast<std::size_t>(j)] = std::round(var * 1e9) / 1e9;
        }
        std::iota(r.order.begin(), r.order.end(), 0);
        std::stable_sort(r.order.begin(), r.order.end(), [&](int a, int b) {
            return r.scores[static_cast<std::size_t>(a)] > r.scores[static_cast<std::size_t>(b)];
        });
    }
    return r;
}

inline BaselineMethod parse_baseline(const std::string& s) {
    if (s == "random") return BaselineMethod::Random;
    if (s == "variance") return BaselineMethod::Variance;
    throw usage_error("unknown baseline '" + s + "'");
}

namespace detail {

struct FoldContext {
    MultiLabelDataset train;      // standardized when requested
    MultiLabelDataset test;       // transformed with the train-fold parameters
};

inline FoldContext make_fold(const MultiLabelDataset& d, const FoldAssignment& fa,
                             int fold, bool do_standardize) {
    FoldContext ctx;
    ctx.train = subset_rows(d, fa.train_indices(fold));
    ctx.test = subset_rows(d, fa.test_indices(fold));
    if (do_standardize) {
        auto [train_std, scaler] = standardize(ctx.train);
        ctx.train = std::move(train_std);
        ctx.test.X = scaler.apply(ctx.test.X);
    }
    return ctx;
}

inline double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Evaluates one ranking over all fractions, appending one record per
// fraction. fit_seconds is amortized into every record of the cell.
inline void evaluate_ranking(const ExperimentConfig& cfg, const FoldContext& ctx,
                             const std::string& dataset_name, const std::string& algo,
                             int fold, std::uint64_t seed, const FeatureRanking& ranking,
                             double fit_seconds, const FactorModel* model,
                             std::vector<RunRecord>& records) {
    for (double fraction : cfg.fractions) {
        const auto t0 = std::chrono::steady_clock::now();
        const int k_sel = selected_feature_count(fraction, ctx.train.X.cols());
        std::vector<int> picked(ranking.order.begin(), ranking.order.begin() + k_sel);
        MultiLabelDataset train_sel = select_features(ctx.train, picked);
        MultiLabelDataset test_sel = select_features(ctx.test, picked);
        MlknnModel knn = mlknn_fit(train_sel, cfg.knn_k, cfg.knn_s);
        MlknnPrediction pred = mlknn_predict(knn, test_sel.X);

        RunRecord rec;
        rec.dataset = dataset_name;
        rec.algorithm = algo;
        rec.fraction = fraction;
        rec.fold = fold;
        rec.seed = seed;
        rec.metrics = evaluate_all(pred.predictions, pred.scores, test_sel.Y);
        if (model) {
            rec.iterations = model->iterations_run;
            rec.final_objective = model->objective_history.back();
            rec.has_fit_info = true;
        }
        rec.seconds = fit_seconds + elapsed_seconds(t0);
        records.push_back(std::move(rec));
    }
}

inline void run_dataset(const ExperimentConfig& cfg, const MultiLabelDataset& d,
                        ExperimentResult& out, bool collect_traces) {
    for (std::uint64_t seed : cfg.seeds) {
        const FoldAssignment fa =
            kfold_split(d.num_instances(), cfg.cv_folds,
                        task_seed(seed, d.name + "/folds"));
        for (int fold = 0; fold < cfg.cv_folds; ++fold) {
            const FoldContext ctx = make_fold(d, fa, fold, cfg.standardize);
            for (const auto& algo : cfg.algorithms) {
                const std::string task_id =
                    d.name + "/" + algo + "/fold" + std::to_string(fold);
                try {
                    if (algo == "mfsir") {
                        FitConfig fit_cfg = cfg.fit;
                        fit_cfg.seed = task_seed(seed, task_id);
                        const auto t0 = std::chrono::steady_clock::now();
                        FitResult res = fit(ctx.train.X, ctx.train.Y, fit_cfg, cfg.graph);
                        const double fit_seconds = elapsed_seconds(t0);
                        if (collect_traces)
                            out.traces.push_back(
                                {d.name, seed, fold, res.model.objective_history});
                        evaluate_ranking(cfg, ctx, d.name, algo, fold, seed, res.ranking,
                                         fit_seconds, &res.model, out.records);
                    } else {
                        FeatureRanking ranking = baseline_rank(
                            parse_baseline(algo), ctx.train, task_seed(seed, task_id));
                        evaluate_ranking(cfg, ctx, d.name, algo, fold, seed, ranking, 0.0,
                                         nullptr, out.records);
                    }
                } catch (const numeric_error& e) {
                    out.failures.push_back({d.name, algo, fold, seed, e.what()});
                } catch (const data_error& e) {
                    out.failures.push_back({d.name, algo, fold, seed, e.what()});
                }
            }
        }
    }
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult out;
    for (const auto& spec : cfg.datasets) {
        MultiLabelDataset d = load_dataset(spec.arff, spec.xml);
        if (!spec.name.empty()) d.name = spec.name;
        detail::run_dataset(cfg, d, out, /*collect_traces=*/true);
    }

    // sensitivity sweeps: rerun the estimator cells with one balance weight
    // varied while the other stays at its configured value
    auto sweep = [&](const std::string& param, const std::vector<double>& values) {
        for (double v : values) {
            ExperimentConfig sub = cfg;
            sub.algorithms = {"mfsir"};
            sub.alpha_sweep.clear();
            sub.beta_sweep.clear();
            if (param == "alpha")
                sub.fit.alpha = v;
            else
                sub.fit.beta = v;
            ExperimentResult run;
            for (const auto& spec : cfg.datasets) {
                MultiLabelDataset d = load_dataset(spec.arff, spec.xml);
                if (!spec.name.empty()) d.name = spec.name;
                detail::run_dataset(sub, d, run, /*collect_traces=*/false);
            }
            // aggregate over folds and seeds per (dataset, fraction, metric)
            std::map<std::pair<std::string, double>, std::vector<const RunRecord*>> cells;
            for (const auto& r : run.records)
                cells[{r.dataset, r.fraction}].push_back(&r);
            for (const auto& [key, rows] : cells) {
                auto push = [&](const std::string& metric, auto getter) {
                    double mean = 0.0;
                    for (auto* r : rows) mean += getter(r->metrics);
                    mean /= static_cast<double>(rows.size());
                    double var = 0.0;
                    for (auto* r : rows) {
                        const double dlt = getter(r->metrics) - mean;
                        var += dlt * dlt;
                    }
                    var /= static_cast<double>(rows.size());
                    out.sensitivity.push_back({param, v, key.first, key.second, metric,
                                               mean, std::sqrt(var)});
                };
                push("hl", [](const EvaluationResult& m) { return m.hamming_loss; });
                push("rl", [](const EvaluationResult& m) { return m.ranking_loss; });
                push("mauc", [](const EvaluationResult& m) { return m.macro_auc; });
                push("mf1", [](const EvaluationResult& m) { return m.macro_f1; });
            }
        }
    };
    if (!cfg.alpha_sweep.empty()) sweep("alpha", cfg.alpha_sweep);
    if (!cfg.beta_sweep.empty()) sweep("beta", cfg.beta_sweep);
    return out;
}

// ---------------------------------------------------------------------------
// persistence

namespace detail {

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;  // population
    int count = 0;
};

inline MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd r;
    r.count = static_cast<int>(xs.size());
    if (xs.empty()) return r;
    for (double x : xs) r.mean += x;
    r.mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - r.mean) * (x - r.mean);
    r.stddev = std::sqrt(var / static_cast<double>(xs.size()));
    return r;
}

using MetricGetter = double (*)(const EvaluationResult&);

inline const std::vector<std::pair<std::string, MetricGetter>>& metric_getters() {
    static const std::vector<std::pair<std::string, MetricGetter>> g = {
        {"hl", [](const EvaluationResult& m) { return m.hamming_loss; }},
        {"rl", [](const EvaluationResult& m) { return m.ranking_loss; }},
        {"mauc", [](const EvaluationResult& m) { return m.macro_auc; }},
        {"mf1", [](const EvaluationResult& m) { return m.macro_f1; }},
    };
    return g;
}

}  // namespace detail

inline void emit_outputs(const ExperimentResult& result, const ExperimentConfig& cfg) {
    if (result.records.empty()) throw data_error("emit_outputs: no records to write");
    namespace fs = std::filesystem;
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw data_error("cannot create output directory: " + cfg.out_dir);

    {
        csv::Writer w((dir / "results.csv").string());
        w.raw_row({"dataset", "algorithm", "fraction", "fold", "seed", "hl", "rl", "mauc",
                   "mf1", "skipped_i", "skipped_l", "seconds", "iterations", "objective"});
        for (const auto& r : result.records) {
            std::vector<std::string> row = {
                r.dataset,
                r.algorithm,
                csv::fmt(r.fraction),
                csv::fmt(r.fold),
                csv::fmt(r.seed),
                csv::fmt(r.metrics.hamming_loss),
                csv::fmt(r.metrics.ranking_loss),
                csv::fmt(r.metrics.macro_auc),
                csv::fmt(r.metrics.macro_f1),
                csv::fmt(r.metrics.skipped_instances),
                csv::fmt(r.metrics.skipped_labels),
                csv::fmt(r.seconds),
                r.has_fit_info ? csv::fmt(r.iterations) : std::string(),
                r.has_fit_info ? csv::fmt(r.final_objective) : std::string()};
            w.raw_row(row);
        }
    }

    {
        // both aggregations: over folds x fractions (one row per
        // dataset/algorithm/metric) and over folds at each fraction
        csv::Writer w((dir / "summary.csv").string());
        w.raw_row({"dataset", "algorithm", "metric", "grouping", "fraction", "mean", "std",
                   "count"});
        std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> groups;
        for (const auto& r : result.records)
            groups[{r.dataset, r.algorithm}].push_back(&r);
        for (const auto& [key, rows] : groups) {
            for (const auto& [metric, get] : detail::metric_getters()) {
                std::vector<double> all;
                std::map<double, std::vector<double>> per_fraction;
                for (auto* r : rows) {
                    all.push_back(get(r->metrics));
                    per_fraction[r->fraction].push_back(get(r->metrics));
                }
                const auto overall = detail::mean_std(all);
                w.raw_row({key.first, key.second, metric, "folds_and_fractions", "",
                           csv::fmt(overall.mean), csv::fmt(overall.stddev),
                           csv::fmt(overall.count)});
                for (const auto& [fraction, xs] : per_fraction) {
                    const auto ms = detail::mean_std(xs);
                    w.raw_row({key.first, key.second, metric, "folds", csv::fmt(fraction),
                               csv::fmt(ms.mean), csv::fmt(ms.stddev), csv::fmt(ms.count)});
                }
            }
        }
    }

    {
        // metric-vs-fraction curves, one row per point
        csv::Writer w((dir / "curves.csv").string());
        w.raw_row({"dataset", "algorithm", "metric", "fraction", "mean", "std"});
        std::map<std::tuple<std::string, std::string, double>, std::vector<const RunRecord*>>
            cells;
        for (const auto& r : result.records)
            cells[{r.dataset, r.algorithm, r.fraction}].push_back(&r);
        for (const auto& [metric, get] : detail::metric_getters()) {
            for (const auto& [key, rows] : cells) {
                std::vector<double> xs;
                for (auto* r : rows) xs.push_back(get(r->metrics));
                const auto ms = detail::mean_std(xs);
                w.raw_row({std::get<0>(key), std::get<1>(key), metric,
                           csv::fmt(std::get<2>(key)), csv::fmt(ms.mean),
                           csv::fmt(ms.stddev)});
            }
        }
    }

    if (!result.traces.empty()) {
        fs::create_directories(dir / "convergence", ec);
        for (const auto& t : result.traces) {
            std::string fname = t.dataset + "_seed" + std::to_string(t.seed) + "_fold" +
                                std::to_string(t.fold) + ".csv";
            csv::Writer w((dir / "convergence" / fname).string());
            w.raw_row({"iteration", "objective"});
            for (std::size_t i = 0; i < t.objective_history.size(); ++i)
                w.raw_row({csv::fmt(static_cast<int>(i)), csv::fmt(t.objective_history[i])});
        }
    }

    if (!result.sensitivity.empty()) {
        csv::Writer w((dir / "sensitivity.csv").string());
        w.raw_row({"param", "value", "dataset", "fraction", "metric", "mean", "std"});
        for (const auto& s : result.sensitivity)
            w.raw_row({s.param, csv::fmt(s.value), s.dataset, csv::fmt(s.fraction), s.metric,
                       csv::fmt(s.mean), csv::fmt(s.stddev)});
    }

    if (!result.failures.empty()) {
        csv::Writer w((dir / "failures.csv").string());
        w.raw_row({"dataset", "algorithm", "fold", "seed", "message"});
        for (const auto& f : result.failures) {
            std::string msg = f.message;
            for (auto& c : msg)
                if (c == ',' || c == '\n') c = ';';
            w.raw_row({f.dataset, f.algorithm, csv::fmt(f.fold), csv::fmt(f.seed), msg});
        }
    }

    if (cfg.plots) {
        fs::create_directories(dir / "plots", ec);
        for (const auto& t : result.traces) {
            svg::Series s;
            s.label = "objective";
            for (std::size_t i = 0; i < t.objective_history.size(); ++i) {
                s.x.push_back(static_cast<double>(i));
                s.y.push_back(t.objective_history[i]);
            }
            std::string fname = t.dataset + "_seed" + std::to_string(t.seed) + "_fold" +
                                std::to_string(t.fold) + ".svg";
            svg::write_line_chart((dir / "plots" / fname).string(),
                                  "convergence: " + t.dataset, {s});
        }
        // one chart per dataset x metric, one series per algorithm
        std::map<std::tuple<std::string, std::string, double>, std::vector<double>> cells;
        for (const auto& r : result.records)
            for (const auto& [metric, get] : detail::metric_getters())
                cells[{r.dataset, r.algorithm + "|" + metric, r.fraction}].push_back(
                    get(r.metrics));
        std::map<std::pair<std::string, std::string>, std::map<std::string, svg::Series>>
            charts;
        for (const auto& [key, xs] : cells) {
            const auto& [dataset, algo_metric, fraction] = key;
            const auto bar = algo_metric.find('|');
            const std::string algo = algo_metric.substr(0, bar);
            const std::string metric = algo_metric.substr(bar + 1);
            auto& series = charts[{dataset, metric}][algo];
            series.label = algo;
            series.x.push_back(fraction);
            series.y.push_back(detail::mean_std(xs).mean);
        }
        for (const auto& [key, series_map] : charts) {
            std::vector<svg::Series> series;
            for (const auto& [algo, s] : series_map) series.push_back(s);
            svg::write_line_chart(
                (dir / "plots" / ("curve_" + key.first + "_" + key.second + ".svg")).string(),
                key.second + " vs fraction: " + key.first, series);
        }
    }
}

// ---------------------------------------------------------------------------
// comparison over a results file

enum class MetricId { HammingLoss, RankingLoss, MacroAuc, MacroF1 };

inline MetricId parse_metric(const std::string& s) {
    if (s == "hl") return MetricId::HammingLoss;
    if (s == "rl") return MetricId::RankingLoss;
    if (s == "mauc") return MetricId::MacroAuc;
    if (s == "mf1") return MetricId::MacroF1;
    throw usage_error("unknown metric '" + s + "' (expected hl, rl, mauc or mf1)");
}

inline std::string metric_column(MetricId m) {
    switch (m) {
        case MetricId::HammingLoss: return "hl";
        case MetricId::RankingLoss: return "rl";
        case MetricId::MacroAuc: return "mauc";
        default: return "mf1";
    }
}

inline bool metric_default_higher_better(MetricId m) {
    return m == MetricId::MacroAuc || m == MetricId::MacroF1;
}

/// Builds the datasets x algorithms table of per-dataset metric means from a
/// results.csv written by emit_outputs.
inline MetricTable build_metric_table(const csv::Table& results, MetricId metric,
                                      bool higher_is_better) {
    const int c_dataset = results.column("dataset");
    const int c_algo = results.column("algorithm");
    const int c_metric = results.column(metric_column(metric));

    std::vector<std::string> datasets, algorithms;
    std::map<std::pair<std::string, std::string>, std::pair<double, int>> acc;
    for (const auto& row : results.rows) {
        const std::string& d = row[static_cast<std::size_t>(c_dataset)];
        const std::string& a = row[static_cast<std::size_t>(c_algo)];
        if (std::find(datasets.begin(), datasets.end(), d) == datasets.end())
            datasets.push_back(d);
        if (std::find(algorithms.begin(), algorithms.end(), a) == algorithms.end())
            algorithms.push_back(a);
        auto& cell = acc[{d, a}];
        cell.first += std::stod(row[static_cast<std::size_t>(c_metric)]);
        cell.second += 1;
    }
    if (datasets.size() < 2 || algorithms.size() < 2)
        throw data_error("comparison needs results for >= 2 algorithms on >= 2 datasets");

    MetricTable t;
    t.higher_is_better = higher_is_better;
    t.dataset_names = datasets;
    t.algorithm_names = algorithms;
    t.values.resize(static_cast<Eigen::Index>(datasets.size()),
                    static_cast<Eigen::Index>(algorithms.size()));
    for (std::size_t i = 0; i < datasets.size(); ++i)
        for (std::size_t j = 0; j < algorithms.size(); ++j) {
            auto it = acc.find({datasets[i], algorithms[j]});
            if (it == acc.end() || it->second.second == 0)
                throw data_error("no results for algorithm '" + algorithms[j] +
                                 "' on dataset '" + datasets[i] + "'");
            t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                it->second.first / it->second.second;
        }
    return t;
}

// ---------------------------------------------------------------------------
// flat key = value config files; '#' starts a comment

inline ExperimentConfig parse_config_text(std::istream& in, const std::string& origin) {
    ExperimentConfig cfg;
    bool algorithms_set = false, fractions_set = false, seeds_set = false;
    std::string line;
    int lineno = 0;

    auto split_list = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = mfsir::detail::trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    };

    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = origin + " line " + std::to_string(lineno);
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = mfsir::detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw usage_error(where + ": expected 'key = value'");
        const std::string key = mfsir::detail::trim(line.substr(0, eq));
        const std::string value = mfsir::detail::trim(line.substr(eq + 1));
        try {
            if (key == "dataset") {
                auto parts = split_list(value);
                if (parts.size() < 2 || parts.size() > 3)
                    throw usage_error("dataset takes 'arff,xml[,name]'");
                DatasetSpec spec{parts[0], parts[1], parts.size() == 3 ? parts[2] : ""};
                cfg.datasets.push_back(std::move(spec));
            } else if (key == "algorithms") {
                if (!algorithms_set) { cfg.algorithms.clear(); algorithms_set = true; }
                for (auto& a : split_list(value)) {
                    if (a != "mfsir") parse_baseline(a);  // validates the name
                    cfg.algorithms.push_back(a);
                }
            } else if (key == "fractions") {
                if (!fractions_set) { cfg.fractions.clear(); fractions_set = true; }
                for (auto& f : split_list(value)) cfg.fractions.push_back(std::stod(f));
            } else if (key == "seeds") {
                if (!seeds_set) { cfg.seeds.clear(); seeds_set = true; }
                for (auto& s : split_list(value)) cfg.seeds.push_back(std::stoull(s));
            } else if (key == "folds") {
                cfg.cv_folds = std::stoi(value);
            } else if (key == "knn-k") {
                cfg.knn_k = std::stoi(value);
            } else if (key == "knn-s") {
                cfg.knn_s = std::stod(value);
            } else if (key == "graph-p") {
                cfg.graph.p = std::stoi(value);
            } else if (key == "graph-lambda") {
                cfg.graph.lambda = std::stod(value);
            } else if (key == "alpha") {
                cfg.fit.alpha = std::stod(value);
            } else if (key == "beta") {
                cfg.fit.beta = std::stod(value);
            } else if (key == "alphas") {
                cfg.alpha_sweep.clear();
                for (auto& v : split_list(value)) cfg.alpha_sweep.push_back(std::stod(v));
            } else if (key == "betas") {
                cfg.beta_sweep.clear();
                for (auto& v : split_list(value)) cfg.beta_sweep.push_back(std::stod(v));
            } else if (key == "eta") {
                cfg.fit.eta = std::stod(value);
            } else if (key == "varpi") {
                cfg.fit.varpi = std::stod(value);
            } else if (key == "latent-dim") {
                cfg.fit.latent_dim = std::stoi(value);
            } else if (key == "tmax") {
                cfg.fit.t_max = std::stoi(value);
            } else if (key == "tol") {
                cfg.fit.tol = std::stod(value);
            } else if (key == "init-mode") {
                cfg.fit.init_mode = parse_init_mode(value);
            } else if (key == "standardize") {
                cfg.standardize = value == "true" || value == "1" || value == "yes";
            } else if (key == "plots") {
                cfg.plots = value == "true" || value == "1" || value == "yes";
            } else if (key == "out") {
                cfg.out_dir = value;
            } else {
                throw usage_error(where + ": unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw usage_error(where + ": cannot parse value '" + value + "'");
        } catch (const std::out_of_range&) {
            throw usage_error(where + ": value out of range '" + value + "'");
        }
    }
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open config file: " + path);
    return parse_config_text(in, path);
}

}  // namespace mfsir
