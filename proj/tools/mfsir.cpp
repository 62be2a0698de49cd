// mfsir command-line benchmark tool.
//
// Subcommands: summarize, rank, evaluate, run, compare, synth.
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mfsir/mfsir.hpp"

namespace fs = std::filesystem;

namespace {

struct FitFlags {
    double alpha = 1.0;
    double beta = 1.0;
    double eta = 1e-4;
    double varpi = 1e-5;
    int latent_dim = 0;
    int tmax = 200;
    double tol = 1e-5;
    std::uint64_t seed = 1;
    std::string init_mode = "sparse_nonneg";
    int graph_p = 5;
    double graph_lambda = 0.0;

    void attach(CLI::App& app) {
        app.add_option("--alpha", alpha, "label-decomposition weight");
        app.add_option("--beta", beta, "manifold regularization weight");
        app.add_option("--eta", eta, "gradient step size");
        app.add_option("--varpi", varpi, "initialization perturbation scale");
        app.add_option("--latent-dim", latent_dim, "latent dimension l (0 = auto)");
        app.add_option("--tmax", tmax, "maximum iterations");
        app.add_option("--tol", tol, "relative-change stop threshold");
        app.add_option("--seed", seed, "random seed");
        app.add_option("--init-mode", init_mode, "sparse_nonneg or signed");
        app.add_option("--graph-p", graph_p, "neighbor count for the similarity graph");
        app.add_option("--graph-lambda", graph_lambda,
                       "heat-kernel width (0 = adaptive)");
    }

    mfsir::FitConfig to_fit_config() const {
        mfsir::FitConfig cfg;
        cfg.alpha = alpha;
        cfg.beta = beta;
        cfg.eta = eta;
        cfg.varpi = varpi;
        cfg.latent_dim = latent_dim;
        cfg.t_max = tmax;
        cfg.tol = tol;
        cfg.seed = seed;
        cfg.init_mode = mfsir::parse_init_mode(init_mode);
        return cfg;
    }

    mfsir::GraphConfig to_graph_config() const { return {graph_p, graph_lambda}; }
};

void write_matrix_csv(const std::string& path, const mfsir::Matrix& M) {
    mfsir::csv::Writer w(path);
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        std::vector<std::string> row;
        row.reserve(static_cast<std::size_t>(M.cols()));
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            row.push_back(mfsir::csv::fmt(M(i, j)));
        w.raw_row(row);
    }
}

void write_ranking_csv(std::ostream& out, const mfsir::FeatureRanking& ranking,
                       const std::vector<std::string>& names) {
    out << "rank,feature_index,feature_name,score\n";
    for (std::size_t pos = 0; pos < ranking.order.size(); ++pos) {
        const int f = ranking.order[pos];
        out << pos << "," << f << "," << names[static_cast<std::size_t>(f)] << ","
            << mfsir::csv::fmt(ranking.scores[static_cast<std::size_t>(f)]) << "\n";
    }
}

mfsir::FeatureRanking load_ranking_csv(const std::string& path, Eigen::Index m) {
    const auto table = mfsir::csv::read(path);
    const int c_idx = table.column("feature_index");
    const int c_score = table.column("score");
    mfsir::FeatureRanking r;
    r.scores.assign(static_cast<std::size_t>(m), 0.0);
    for (const auto& row : table.rows) {
        const int f = std::stoi(row[static_cast<std::size_t>(c_idx)]);
        if (f < 0 || f >= m)
            throw mfsir::data_error("ranking refers to feature " + std::to_string(f) +
                                    " outside this dataset");
        r.order.push_back(f);
        r.scores[static_cast<std::size_t>(f)] =
            std::stod(row[static_cast<std::size_t>(c_score)]);
    }
    if (r.order.size() != static_cast<std::size_t>(m))
        throw mfsir::data_error("ranking file does not cover every feature");
    return r;
}

int run_summarize(const std::string& arff, const std::string& xml) {
    const auto d = mfsir::load_dataset(arff, xml);
    const auto s = mfsir::summarize(d);
    std::cout << "name,n,m,q,lcard,lden\n"
              << d.name << "," << s.num_instances << "," << s.num_features << ","
              << s.num_labels << "," << mfsir::csv::fmt(s.label_cardinality) << ","
              << mfsir::csv::fmt(s.label_density) << "\n";
    return 0;
}

int run_rank(const std::string& arff, const std::string& xml, const FitFlags& flags,
             bool do_standardize, const std::string& output,
             const std::string& dump_graph, const std::string& dump_model) {
    mfsir::MultiLabelDataset d = mfsir::load_dataset(arff, xml);
    if (do_standardize) d = mfsir::standardize(d).first;

    mfsir::FitConfig cfg = flags.to_fit_config();
    mfsir::GraphConfig gcfg = flags.to_graph_config();

    mfsir::GraphLaplacian L;
    if (cfg.beta != 0.0 && d.X.rows() > 1) {
        mfsir::GraphConfig gc = gcfg;
        gc.p = std::min<int>(gc.p, static_cast<int>(d.X.rows()) - 1);
        auto graph = mfsir::build_similarity(d.X, gc);
        if (!dump_graph.empty()) {
            fs::create_directories(dump_graph);
            write_matrix_csv((fs::path(dump_graph) / "S.csv").string(), graph.S);
        }
        L = mfsir::build_laplacian(graph);
        if (!dump_graph.empty())
            write_matrix_csv((fs::path(dump_graph) / "L.csv").string(), L.L);
    } else {
        L = mfsir::zero_laplacian(d.X.rows());
    }

    const auto res = mfsir::fit_with_laplacian(d.X, d.Y, L, cfg);

    if (!dump_model.empty()) {
        fs::create_directories(dump_model);
        const fs::path mdir(dump_model);
        write_matrix_csv((mdir / "G.csv").string(), res.model.G);
        write_matrix_csv((mdir / "H.csv").string(), res.model.H);
        write_matrix_csv((mdir / "V.csv").string(), res.model.V);
        write_matrix_csv((mdir / "B.csv").string(), res.model.B);
        mfsir::csv::Writer hist((mdir / "history.csv").string());
        hist.raw_row({"iteration", "objective"});
        for (std::size_t i = 0; i < res.model.objective_history.size(); ++i)
            hist.raw_row({mfsir::csv::fmt(static_cast<int>(i)),
                          mfsir::csv::fmt(res.model.objective_history[i])});
    }

    if (output.empty()) {
        write_ranking_csv(std::cout, res.ranking, d.feature_names);
    } else {
        std::ofstream out(output);
        if (!out) throw mfsir::data_error("cannot open for writing: " + output);
        write_ranking_csv(out, res.ranking, d.feature_names);
    }
    std::cerr << "fit: " << res.model.iterations_run << " iterations, "
              << (res.model.converged ? "converged" : "hit t_max") << ", objective "
              << mfsir::csv::fmt(res.model.objective_history.back()) << "\n";
    return 0;
}

int run_evaluate(const std::string& arff, const std::string& xml,
                 const std::string& method, const std::string& ranking_file,
                 double fraction, int folds, int knn_k, double knn_s,
                 const FitFlags& flags, bool do_standardize) {
    mfsir::MultiLabelDataset d = mfsir::load_dataset(arff, xml);
    const auto fa = mfsir::kfold_split(d.num_instances(), folds,
                                       mfsir::task_seed(flags.seed, d.name + "/folds"));
    std::cout << "dataset,algorithm,fraction,fold,hl,rl,mauc,mf1,skipped_i,skipped_l\n";
    for (int fold = 0; fold < folds; ++fold) {
        mfsir::MultiLabelDataset train = mfsir::subset_rows(d, fa.train_indices(fold));
        mfsir::MultiLabelDataset test = mfsir::subset_rows(d, fa.test_indices(fold));
        if (do_standardize) {
            auto [train_std, scaler] = mfsir::standardize(train);
            train = std::move(train_std);
            test.X = scaler.apply(test.X);
        }
        mfsir::FeatureRanking ranking;
        std::string algo = method;
        if (!ranking_file.empty()) {
            ranking = load_ranking_csv(ranking_file, train.X.cols());
            algo = "ranked:" + fs::path(ranking_file).stem().string();
        } else if (method == "mfsir") {
            mfsir::FitConfig cfg = flags.to_fit_config();
            cfg.seed = mfsir::task_seed(flags.seed,
                                        d.name + "/mfsir/fold" + std::to_string(fold));
            ranking = mfsir::fit(train.X, train.Y, cfg, flags.to_graph_config()).ranking;
        } else {
            ranking = mfsir::baseline_rank(
                mfsir::parse_baseline(method), train,
                mfsir::task_seed(flags.seed, d.name + "/" + method + "/fold" +
                                                 std::to_string(fold)));
        }
        const int k_sel = mfsir::selected_feature_count(fraction, train.X.cols());
        std::vector<int> picked(ranking.order.begin(), ranking.order.begin() + k_sel);
        auto train_sel = mfsir::select_features(train, picked);
        auto test_sel = mfsir::select_features(test, picked);
        auto knn = mfsir::mlknn_fit(train_sel, knn_k, knn_s);
        auto pred = mfsir::mlknn_predict(knn, test_sel.X);
        auto m = mfsir::evaluate_all(pred.predictions, pred.scores, test_sel.Y);
        std::cout << d.name << "," << algo << "," << mfsir::csv::fmt(fraction) << "," << fold
                  << "," << mfsir::csv::fmt(m.hamming_loss) << ","
                  << mfsir::csv::fmt(m.ranking_loss) << "," << mfsir::csv::fmt(m.macro_auc)
                  << "," << mfsir::csv::fmt(m.macro_f1) << "," << m.skipped_instances << ","
                  << m.skipped_labels << "\n";
    }
    return 0;
}

int run_compare(const std::string& results_path, const std::string& metric_name,
                const std::string& direction, double q_alpha, const std::string& out_dir) {
    const auto metric = mfsir::parse_metric(metric_name);
    bool higher_better = mfsir::metric_default_higher_better(metric);
    if (direction == "min")
        higher_better = false;
    else if (direction == "max")
        higher_better = true;
    else if (!direction.empty() && direction != "auto")
        throw mfsir::usage_error("--direction must be min, max or auto");

    const auto table = mfsir::build_metric_table(mfsir::csv::read(results_path), metric,
                                                 higher_better);
    const auto fr = mfsir::friedman(table);
    const int gamma = static_cast<int>(table.values.cols());
    const int theta = static_cast<int>(table.values.rows());
    const double q = q_alpha > 0.0 ? q_alpha : mfsir::nemenyi_q05(gamma);
    const double cd = mfsir::nemenyi_cd(gamma, theta, q);

    std::cout << "metric: " << metric_name << " (" << (higher_better ? "max" : "min")
              << " is better), gamma=" << gamma << " algorithms, theta=" << theta
              << " datasets\n\naverage ranks:\n";
    for (std::size_t j = 0; j < table.algorithm_names.size(); ++j)
        std::cout << "  " << table.algorithm_names[j] << ": "
                  << mfsir::csv::fmt(fr.avg_ranks[j]) << "\n";
    std::cout << "\nchi2_F = " << mfsir::csv::fmt(fr.chi2_f) << "\n";
    if (fr.perfect_separation)
        std::cout << "F_F: perfect separation (identical rank order on every dataset)\n";
    else
        std::cout << "F_F = " << mfsir::csv::fmt(fr.f_f) << " with (" << fr.df1 << ", "
                  << fr.df2 << ") degrees of freedom\n";
    std::cout << "Nemenyi CD = " << mfsir::csv::fmt(cd) << " (q_alpha = "
              << mfsir::csv::fmt(q) << ")\n\nsignificant pairs (|R_i - R_j| >= CD):\n";
    const auto sig = mfsir::pairwise_significance(fr.avg_ranks, cd);
    bool any = false;
    for (std::size_t i = 0; i < sig.size(); ++i)
        for (std::size_t j = i + 1; j < sig.size(); ++j)
            if (sig[i][j]) {
                std::cout << "  " << table.algorithm_names[i] << " vs "
                          << table.algorithm_names[j] << "\n";
                any = true;
            }
    if (!any) std::cout << "  (none)\n";

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        mfsir::csv::Writer w((fs::path(out_dir) / ("cd_diagram_" + metric_name + ".csv"))
                                 .string());
        w.raw_row({"algorithm", "avg_rank", "cd"});
        for (std::size_t j = 0; j < table.algorithm_names.size(); ++j)
            w.raw_row({table.algorithm_names[j], mfsir::csv::fmt(fr.avg_ranks[j]),
                       mfsir::csv::fmt(cd)});
    }
    return 0;
}

int run_synth(const std::string& out_dir, std::uint64_t seed) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    auto emit = [&](const mfsir::MultiLabelDataset& d) {
        mfsir::write_arff(d, (dir / (d.name + ".arff")).string());
        mfsir::write_label_xml(d, (dir / (d.name + ".xml")).string());
        std::cout << "wrote " << (dir / (d.name + ".arff")).string() << " + .xml ("
                  << d.num_instances() << " x " << d.num_features() << ", "
                  << d.num_labels() << " labels)\n";
    };
    emit(mfsir::synth::make_emotions_like(seed));
    emit(mfsir::synth::make_sparse_recovery(seed).data);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-label feature selection via implicitly regularized "
                 "Hadamard-product descent, with an ML-kNN evaluation harness"};
    app.require_subcommand(1);

    // summarize
    auto* sum_cmd = app.add_subcommand("summarize", "print dataset statistics as CSV");
    std::string sum_arff, sum_xml;
    sum_cmd->add_option("arff", sum_arff, "ARFF file")->required();
    sum_cmd->add_option("xml", sum_xml, "MULAN labels XML file")->required();

    // rank
    auto* rank_cmd = app.add_subcommand("rank", "fit the estimator and print the ranking");
    std::string rank_arff, rank_xml, rank_out, rank_dump_graph, rank_dump_model;
    bool rank_no_std = false;
    FitFlags rank_flags;
    rank_cmd->add_option("--dataset", rank_arff, "ARFF file")->required();
    rank_cmd->add_option("--labels", rank_xml, "MULAN labels XML file")->required();
    rank_flags.attach(*rank_cmd);
    rank_cmd->add_flag("--no-standardize", rank_no_std, "skip feature standardization");
    rank_cmd->add_option("--output,-o", rank_out, "write the ranking CSV here");
    rank_cmd->add_option("--dump-graph", rank_dump_graph, "dump S.csv and L.csv here");
    rank_cmd->add_option("--dump-model", rank_dump_model,
                         "dump G/H/V/B/history CSVs here");

    // evaluate
    auto* eval_cmd =
        app.add_subcommand("evaluate", "cross-validated ML-kNN metrics for one ranker");
    std::string eval_arff, eval_xml, eval_method = "mfsir", eval_ranking;
    double eval_fraction = 0.3;
    int eval_folds = 5, eval_k = 10;
    double eval_s = 1.0;
    bool eval_no_std = false;
    FitFlags eval_flags;
    eval_cmd->add_option("--dataset", eval_arff, "ARFF file")->required();
    eval_cmd->add_option("--labels", eval_xml, "MULAN labels XML file")->required();
    eval_cmd->add_option("--method", eval_method, "mfsir, random or variance");
    eval_cmd->add_option("--ranking", eval_ranking, "use a ranking CSV instead of fitting");
    eval_cmd->add_option("--fraction", eval_fraction, "fraction of features to keep");
    eval_cmd->add_option("--folds", eval_folds, "cross-validation folds");
    eval_cmd->add_option("--knn-k", eval_k, "ML-kNN neighbor count");
    eval_cmd->add_option("--knn-s", eval_s, "ML-kNN smoothing");
    eval_flags.attach(*eval_cmd);
    eval_cmd->add_flag("--no-standardize", eval_no_std, "skip feature standardization");

    // run
    auto* run_cmd = app.add_subcommand("run", "full experiment from a config file");
    std::string run_config;
    std::vector<std::string> run_overrides;
    run_cmd->add_option("--config", run_config, "flat key = value config file")->required();
    run_cmd->add_option("--set", run_overrides,
                        "override a config key, e.g. --set folds=2 (repeatable)");

    // compare
    auto* cmp_cmd =
        app.add_subcommand("compare", "Friedman/Nemenyi comparison over a results.csv");
    std::string cmp_results, cmp_metric, cmp_direction = "auto", cmp_out;
    double cmp_q = 0.0;
    cmp_cmd->add_option("--results", cmp_results, "results.csv from 'mfsir run'")
        ->required();
    cmp_cmd->add_option("--metric", cmp_metric, "hl, rl, mauc or mf1")->required();
    cmp_cmd->add_option("--direction", cmp_direction, "min, max or auto");
    cmp_cmd->add_option("--q-alpha", cmp_q, "override the built-in q_0.05 value");
    cmp_cmd->add_option("--out", cmp_out, "also write the CD-diagram CSV here");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "write the bundled demo datasets");
    std::string synth_out = "data";
    std::uint64_t synth_seed = 7;
    synth_cmd->add_option("--out", synth_out, "output directory");
    synth_cmd->add_option("--seed", synth_seed, "generator seed");

    try {
        app.parse(argc, argv);
        if (sum_cmd->parsed()) return run_summarize(sum_arff, sum_xml);
        if (rank_cmd->parsed())
            return run_rank(rank_arff, rank_xml, rank_flags, !rank_no_std, rank_out,
                            rank_dump_graph, rank_dump_model);
        if (eval_cmd->parsed())
            return run_evaluate(eval_arff, eval_xml, eval_method, eval_ranking,
                                eval_fraction, eval_folds, eval_k, eval_s, eval_flags,
                                !eval_no_std);
        if (run_cmd->parsed()) {
            mfsir::ExperimentConfig cfg;
            if (run_overrides.empty()) {
                cfg = mfsir::parse_config_file(run_config);
            } else {
                // command-line overrides append after the file, last key wins
                std::ifstream base(run_config);
                if (!base) throw mfsir::data_error("cannot open config file: " + run_config);
                std::stringstream merged;
                merged << base.rdbuf() << "\n";
                for (const auto& kv : run_overrides) merged << kv << "\n";
                cfg = mfsir::parse_config_text(merged, run_config);
            }
            const auto result = mfsir::run_experiment(cfg);
            mfsir::emit_outputs(result, cfg);
            std::cout << "wrote " << result.records.size() << " records to " << cfg.out_dir
                      << "/results.csv";
            if (!result.failures.empty())
                std::cout << " (" << result.failures.size() << " failed folds, see "
                          << "failures.csv)";
            std::cout << "\n";
            return 0;
        }
        if (cmp_cmd->parsed())
            return run_compare(cmp_results, cmp_metric, cmp_direction, cmp_q, cmp_out);
        if (synth_cmd->parsed()) return run_synth(synth_out, synth_seed);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const mfsir::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const mfsir::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const mfsir::error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
