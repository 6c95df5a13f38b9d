// Command-line front end for the missnet shared library. Talks to the core
// exclusively through the C API in missnet/missnet.h.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "missnet/missnet.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

int exit_code_for(missnet_status status) {
    return status == MISSNET_ERR_NUMERIC ? kExitNumeric : kExitInput;
}

void check(missnet_status status, const std::string& context) {
    if (status == MISSNET_OK) return;
    std::cerr << "error: " << context << ": " << missnet_last_error() << "\n";
    std::exit(exit_code_for(status));
}

struct SeriesDeleter {
    void operator()(missnet_series* s) const { missnet_series_free(s); }
};
struct ModelDeleter {
    void operator()(missnet_model* m) const { missnet_model_free(m); }
};
struct DatasetDeleter {
    void operator()(missnet_dataset* d) const { missnet_dataset_free(d); }
};
using SeriesPtr = std::unique_ptr<missnet_series, SeriesDeleter>;
using ModelPtr = std::unique_ptr<missnet_model, ModelDeleter>;
using DatasetPtr = std::unique_ptr<missnet_dataset, DatasetDeleter>;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> feature_names(const missnet_series* series) {
    const int64_t n = missnet_series_num_features(series);
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(n));
    for (int64_t i = 0; i < n; ++i) {
        const char* name = missnet_series_feature_name(series, i);
        names.push_back(name ? name : ("f" + std::to_string(i)));
    }
    return names;
}

SeriesPtr make_series(int64_t n, int64_t t, const std::vector<double>& values,
                      const std::vector<uint8_t>& mask, const std::vector<std::string>& names) {
    missnet_series* raw = nullptr;
    check(missnet_series_create(n, t, values.data(), mask.data(), &raw), "building series");
    SeriesPtr series(raw);
    for (int64_t i = 0; i < n; ++i)
        check(missnet_series_set_feature_name(series.get(), i, names[static_cast<std::size_t>(i)].c_str()),
              "naming series");
    return series;
}

void write_matrix_csv(const std::filesystem::path& path, int64_t n, int64_t t,
                      const std::vector<double>& values, const std::vector<std::string>& names) {
    std::vector<uint8_t> ones(static_cast<std::size_t>(n * t), 1);
    SeriesPtr series = make_series(n, t, values, ones, names);
    check(missnet_series_write_csv(series.get(), path.string().c_str()),
          "writing " + path.string());
}

void write_regimes_csv(const std::filesystem::path& path, const std::vector<int32_t>& regimes) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(kExitInput);
    }
    out << "timestep,regime\n";
    for (std::size_t t = 0; t < regimes.size(); ++t) out << t << ',' << regimes[t] << '\n';
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(kExitInput);
    }
    out << j.dump(2) << '\n';
}

struct HyperFlags {
    missnet_hyperparams params;

    void attach(CLI::App* cmd) {
        missnet_hyperparams_init(&params);
        cmd->add_option("--latent-dim", params.latent_dim, "Latent dimension L")
            ->capture_default_str();
        cmd->add_option("--num-regimes", params.num_regimes, "Number of regimes K")
            ->capture_default_str();
        cmd->add_option("--alpha", params.alpha, "Inter-correlation weight in [0,1]")
            ->capture_default_str();
        cmd->add_option("--lambda", params.lambda, "Network sparsity penalty")
            ->capture_default_str();
        cmd->add_option("--max-iter", params.max_iter, "Maximum EM iterations")
            ->capture_default_str();
        cmd->add_option("--tol", params.tol, "Relative objective tolerance")
            ->capture_default_str();
        cmd->add_option("--seed", params.seed, "Random seed")->capture_default_str();
        cmd->add_option("--restarts", params.restarts, "Random restarts")->capture_default_str();
        cmd->add_option("--threads", params.threads, "Worker threads (0 = auto)")
            ->capture_default_str();
    }
};

json sparse_triplets(const std::vector<double>& m, int64_t n, double threshold,
                     bool include_diagonal) {
    json entries = json::array();
    for (int64_t j = 0; j < n; ++j) {
        for (int64_t i = 0; i <= j; ++i) {
            if (i == j && !include_diagonal) continue;
            const double v = m[static_cast<std::size_t>(i + j * n)];
            if (i != j && std::abs(v) <= threshold) continue;
            entries.push_back(json::array({i, j, v}));
        }
    }
    return entries;
}

void write_dot(const std::filesystem::path& path, const std::vector<double>& pc, int64_t n,
               const std::vector<std::string>& names, double threshold) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(kExitInput);
    }
    out << "graph network {\n";
    for (int64_t i = 0; i < n; ++i)
        out << "  n" << i << " [label=\"" << names[static_cast<std::size_t>(i)] << "\"];\n";
    for (int64_t j = 0; j < n; ++j) {
        for (int64_t i = 0; i < j; ++i) {
            const double v = pc[static_cast<std::size_t>(i + j * n)];
            if (std::abs(v) <= threshold) continue;
            out << "  n" << i << " -- n" << j << " [weight=\"" << fmt(v) << "\"];\n";
        }
    }
    out << "}\n";
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/* ------------------------------------------------------------------ */

int run_impute(const std::string& input, const std::string& out_dir, HyperFlags& hyper,
               bool no_zscore, double edge_threshold, bool export_dot) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path out(out_dir);

    missnet_series* raw = nullptr;
    check(missnet_series_from_csv(input.c_str(), &raw), "reading " + input);
    SeriesPtr series(raw);

    const int64_t n = missnet_series_num_features(series.get());
    const int64_t t = missnet_series_num_steps(series.get());
    const std::vector<std::string> names = feature_names(series.get());

    std::vector<double> original(static_cast<std::size_t>(n * t));
    std::vector<uint8_t> mask(static_cast<std::size_t>(n * t));
    check(missnet_series_copy_values(series.get(), original.data()), "reading series values");
    check(missnet_series_copy_mask(series.get(), mask.data()), "reading series mask");

    std::vector<double> means(static_cast<std::size_t>(n), 0.0);
    std::vector<double> stds(static_cast<std::size_t>(n), 1.0);
    SeriesPtr fit_input;
    if (no_zscore) {
        fit_input = std::move(series);
    } else {
        missnet_series* normalized = nullptr;
        check(missnet_series_zscore(series.get(), &normalized, means.data(), stds.data()),
              "standardizing input");
        fit_input.reset(normalized);
    }

    missnet_model* model_raw = nullptr;
    check(missnet_fit(fit_input.get(), &hyper.params, &model_raw), "fitting model");
    ModelPtr model(model_raw);

    std::vector<double> imputed(static_cast<std::size_t>(n * t));
    check(missnet_model_copy_imputed(model.get(), imputed.data()), "reading imputation");
    for (int64_t j = 0; j < t; ++j) {
        for (int64_t i = 0; i < n; ++i) {
            const std::size_t idx = static_cast<std::size_t>(i + j * n);
            if (mask[idx]) {
                imputed[idx] = original[idx];  // observed cells pass through untouched
            } else if (!no_zscore) {
                imputed[idx] = imputed[idx] * stds[static_cast<std::size_t>(i)] +
                               means[static_cast<std::size_t>(i)];
            }
        }
    }
    write_matrix_csv(out / "imputed.csv", n, t, imputed, names);

    std::vector<int32_t> regimes(static_cast<std::size_t>(t));
    check(missnet_model_copy_regime_path(model.get(), regimes.data()), "reading regimes");
    write_regimes_csv(out / "regimes.csv", regimes);

    const int32_t k_count = missnet_model_num_regimes(model.get());
    json networks;
    networks["num_features"] = n;
    networks["edge_threshold"] = edge_threshold;
    networks["regimes"] = json::array();
    for (int32_t k = 0; k < k_count; ++k) {
        std::vector<double> precision(static_cast<std::size_t>(n * n));
        std::vector<double> pc(static_cast<std::size_t>(n * n));
        std::vector<double> mean(static_cast<std::size_t>(n));
        check(missnet_model_copy_precision(model.get(), k, precision.data()), "reading network");
        check(missnet_model_copy_partial_correlation(model.get(), k, pc.data()),
              "reading network");
        check(missnet_model_copy_regime_mean(model.get(), k, mean.data()), "reading network");
        json entry;
        entry["index"] = k;
        entry["mean"] = mean;
        entry["precision"] = sparse_triplets(precision, n, edge_threshold, true);
        entry["partial_correlation"] = sparse_triplets(pc, n, edge_threshold, false);
        networks["regimes"].push_back(std::move(entry));
        if (export_dot)
            write_dot(out / ("network_" + std::to_string(k) + ".dot"), pc, n, names,
                      edge_threshold);
    }
    write_json(out / "networks.json", networks);

    const int32_t iters = missnet_model_iterations(model.get());
    std::vector<double> trace(static_cast<std::size_t>(iters));
    std::vector<double> seconds(static_cast<std::size_t>(iters));
    std::vector<int64_t> counts(static_cast<std::size_t>(k_count));
    check(missnet_model_objective_trace(model.get(), trace.data()), "reading report");
    check(missnet_model_iteration_seconds(model.get(), seconds.data()), "reading report");
    check(missnet_model_regime_counts(model.get(), counts.data()), "reading report");
    json report;
    report["iterations"] = iters;
    report["converged"] = missnet_model_converged(model.get()) != 0;
    report["objective_trace"] = trace;
    report["iteration_seconds"] = seconds;
    report["regime_counts"] = counts;
    report["zscore"] = !no_zscore;
    json warnings = json::array();
    for (int32_t w = 0; w < missnet_model_warning_count(model.get()); ++w)
        warnings.push_back(missnet_model_warning(model.get(), w));
    report["warnings"] = std::move(warnings);
    write_json(out / "report.json", report);

    std::cout << "wrote " << (out / "imputed.csv").string() << ", regimes.csv, networks.json, report.json\n";
    return kExitOk;
}

int run_synth(char pattern, const std::string& out_dir, missnet_synth_spec spec,
              double missing_rate, double max_block_frac) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path out(out_dir);

    missnet_dataset* raw = nullptr;
    check(missnet_synth_generate(&spec, pattern, &raw), "generating dataset");
    DatasetPtr dataset(raw);

    const int64_t n = missnet_dataset_num_features(dataset.get());
    const int64_t t = missnet_dataset_num_steps(dataset.get());

    std::vector<double> clean(static_cast<std::size_t>(n * t));
    check(missnet_dataset_copy_clean(dataset.get(), clean.data()), "reading dataset");
    std::vector<std::string> names;
    for (int64_t i = 0; i < n; ++i) names.push_back("f" + std::to_string(i));
    write_matrix_csv(out / "clean.csv", n, t, clean, names);

    missnet_series* observed_raw = nullptr;
    check(missnet_dataset_inject_missing(dataset.get(), missing_rate, max_block_frac, spec.seed,
                                         &observed_raw),
          "injecting missing values");
    SeriesPtr observed(observed_raw);
    for (int64_t i = 0; i < n; ++i)
        check(missnet_series_set_feature_name(observed.get(), i, names[static_cast<std::size_t>(i)].c_str()),
              "naming series");
    check(missnet_series_write_csv(observed.get(), (out / "observed.csv").string().c_str()),
          "writing observed.csv");

    std::vector<uint8_t> mask(static_cast<std::size_t>(n * t));
    check(missnet_series_copy_mask(observed.get(), mask.data()), "reading mask");
    std::vector<double> mask_values(mask.begin(), mask.end());
    write_matrix_csv(out / "mask.csv", n, t, mask_values, names);

    std::vector<int32_t> path(static_cast<std::size_t>(t));
    check(missnet_dataset_copy_true_path(dataset.get(), path.data()), "reading true path");
    write_regimes_csv(out / "truth_regimes.csv", path);

    double achieved = 0.0;
    for (uint8_t m : mask) achieved += m == 0 ? 1.0 : 0.0;
    achieved /= static_cast<double>(n * t);

    json meta;
    meta["pattern"] = std::string(1, pattern);
    meta["num_steps"] = spec.num_steps;
    meta["num_features"] = spec.num_features;
    meta["latent_dim"] = spec.latent_dim;
    meta["num_regimes"] = spec.num_regimes > 0 ? spec.num_regimes : (pattern == 'A' ? 1 : 2);
    meta["switch_period"] = spec.switch_period;
    meta["seed"] = spec.seed;
    meta["missing_rate"] = missing_rate;
    meta["achieved_missing_rate"] = achieved;
    meta["max_block_frac"] = max_block_frac;
    meta["rng"] = missnet_dataset_rng_id(dataset.get());
    write_json(out / "metadata.json", meta);

    std::cout << "wrote clean.csv, observed.csv, mask.csv, truth_regimes.csv, metadata.json in "
              << out_dir << "\n";
    return kExitOk;
}

SeriesPtr load_series(const std::string& path, const std::string& what) {
    missnet_series* raw = nullptr;
    check(missnet_series_from_csv(path.c_str(), &raw), "reading " + what + " " + path);
    return SeriesPtr(raw);
}

std::vector<int32_t> load_regime_column(const std::string& path) {
    SeriesPtr series = load_series(path, "regimes");
    const int64_t n = missnet_series_num_features(series.get());
    const int64_t t = missnet_series_num_steps(series.get());
    if (n != 2) {
        std::cerr << "error: " << path << ": expected timestep,regime columns\n";
        std::exit(kExitInput);
    }
    std::vector<double> values(static_cast<std::size_t>(n * t));
    check(missnet_series_copy_values(series.get(), values.data()), "reading regimes");
    std::vector<int32_t> out(static_cast<std::size_t>(t));
    for (int64_t j = 0; j < t; ++j)
        out[static_cast<std::size_t>(j)] = static_cast<int32_t>(values[static_cast<std::size_t>(1 + j * n)]);
    return out;
}

int run_eval(const std::string& truth_path, const std::string& imputed_path,
             const std::string& mask_path, const std::string& eval_mask_path,
             const std::string& truth_regimes_path, const std::string& est_regimes_path,
             int32_t num_regimes) {
    SeriesPtr truth = load_series(truth_path, "truth");
    SeriesPtr imputed = load_series(imputed_path, "imputed");

    const int64_t n = missnet_series_num_features(truth.get());
    const int64_t t = missnet_series_num_steps(truth.get());
    if (missnet_series_num_features(imputed.get()) != n ||
        missnet_series_num_steps(imputed.get()) != t) {
        std::cerr << "error: truth and imputed shapes differ\n";
        return kExitInput;
    }

    json result;
    if (!mask_path.empty() || !eval_mask_path.empty()) {
        std::vector<uint8_t> eval_mask(static_cast<std::size_t>(n * t), 0);
        if (!eval_mask_path.empty()) {
            SeriesPtr em = load_series(eval_mask_path, "eval mask");
            if (missnet_series_num_features(em.get()) != n ||
                missnet_series_num_steps(em.get()) != t) {
                std::cerr << "error: eval mask shape differs from truth\n";
                return kExitInput;
            }
            std::vector<double> values(static_cast<std::size_t>(n * t));
            check(missnet_series_copy_values(em.get(), values.data()), "reading eval mask");
            for (std::size_t i = 0; i < values.size(); ++i) eval_mask[i] = values[i] != 0.0 ? 1 : 0;
        } else {
            // score the cells hidden by the observation mask
            SeriesPtr m = load_series(mask_path, "mask");
            if (missnet_series_num_features(m.get()) != n ||
                missnet_series_num_steps(m.get()) != t) {
                std::cerr << "error: mask shape differs from truth\n";
                return kExitInput;
            }
            std::vector<double> values(static_cast<std::size_t>(n * t));
            check(missnet_series_copy_values(m.get(), values.data()), "reading mask");
            for (std::size_t i = 0; i < values.size(); ++i) eval_mask[i] = values[i] == 0.0 ? 1 : 0;
        }

        std::vector<double> truth_values(static_cast<std::size_t>(n * t));
        std::vector<double> imputed_values(static_cast<std::size_t>(n * t));
        check(missnet_series_copy_values(truth.get(), truth_values.data()), "reading truth");
        check(missnet_series_copy_values(imputed.get(), imputed_values.data()),
              "reading imputed");
        double score = 0.0;
        check(missnet_rmse(n, t, truth_values.data(), imputed_values.data(), eval_mask.data(),
                           &score),
              "computing rmse");
        result["rmse"] = score;
    }

    if (!truth_regimes_path.empty() && !est_regimes_path.empty()) {
        std::vector<int32_t> a = load_regime_column(truth_regimes_path);
        std::vector<int32_t> b = load_regime_column(est_regimes_path);
        if (a.size() != b.size()) {
            std::cerr << "error: regime path lengths differ\n";
            return kExitInput;
        }
        int32_t k = num_regimes;
        if (k <= 0) {
            int32_t top = 0;
            for (int32_t v : a) top = std::max(top, v);
            for (int32_t v : b) top = std::max(top, v);
            k = top + 1;
        }
        double acc = 0.0;
        check(missnet_regime_accuracy(static_cast<int64_t>(a.size()), a.data(), b.data(), k, &acc),
              "computing regime accuracy");
        result["regime_accuracy"] = acc;
    }

    if (result.empty()) {
        std::cerr << "error: nothing to evaluate; pass --mask/--eval-mask or regime paths\n";
        return kExitInput;
    }
    std::cout << result.dump() << "\n";
    return kExitOk;
}

int run_bench(const std::vector<int64_t>& t_values, int64_t features, int32_t latent_dim,
              int32_t num_regimes, double missing_rate, int iters, uint64_t seed,
              int32_t threads) {
    std::printf("%-8s %-6s %-22s %-22s\n", "T", "iters", "median_iter_seconds", "total_seconds");
    for (int64_t t_len : t_values) {
        missnet_synth_spec spec;
        missnet_synth_spec_init(&spec);
        spec.num_steps = t_len;
        spec.num_features = features;
        spec.latent_dim = latent_dim;
        spec.num_regimes = num_regimes;
        spec.seed = seed;

        missnet_dataset* ds_raw = nullptr;
        check(missnet_synth_generate(&spec, num_regimes == 2 ? 'B' : 'A', &ds_raw),
              "generating dataset");
        DatasetPtr dataset(ds_raw);

        missnet_series* series_raw = nullptr;
        check(missnet_dataset_inject_missing(dataset.get(), missing_rate, 0.05, seed, &series_raw),
              "injecting missing values");
        SeriesPtr series(series_raw);

        missnet_series* norm_raw = nullptr;
        check(missnet_series_zscore(series.get(), &norm_raw, nullptr, nullptr), "standardizing");
        SeriesPtr normalized(norm_raw);

        missnet_hyperparams params;
        missnet_hyperparams_init(&params);
        params.latent_dim = latent_dim;
        params.num_regimes = num_regimes;
        params.max_iter = iters;
        params.tol = 1e-300;  // run all iterations
        params.seed = seed;
        params.threads = threads;

        missnet_model* model_raw = nullptr;
        check(missnet_fit(normalized.get(), &params, &model_raw), "fitting");
        ModelPtr model(model_raw);

        const int32_t ran = missnet_model_iterations(model.get());
        std::vector<double> seconds(static_cast<std::size_t>(ran));
        check(missnet_model_iteration_seconds(model.get(), seconds.data()), "reading timings");
        double total = 0.0;
        for (double s : seconds) total += s;
        std::printf("%-8lld %-6d %-22.6f %-22.6f\n", static_cast<long long>(t_len), ran,
                    median(seconds), total);
        std::fflush(stdout);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"missnet: multivariate time series imputation with switching sparse networks"};
    app.require_subcommand(1);

    // impute
    auto* impute = app.add_subcommand("impute", "Impute a CSV time series");
    std::string input;
    std::string out_dir = ".";
    bool no_zscore = false;
    bool export_dot = false;
    double edge_threshold = 1e-6;
    HyperFlags hyper;
    impute->add_option("input", input, "Input CSV (header row, one row per timestep)")
        ->required();
    impute->add_option("--out", out_dir, "Output directory")->capture_default_str();
    hyper.attach(impute);
    impute->add_flag("--no-zscore", no_zscore, "Skip per-feature standardization");
    impute->add_option("--edge-threshold", edge_threshold,
                       "Minimum |partial correlation| exported as an edge")
        ->capture_default_str();
    impute->add_flag("--export-dot", export_dot, "Also write per-regime DOT graphs");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    std::string pattern = "A";
    std::string synth_out = ".";
    missnet_synth_spec spec;
    missnet_synth_spec_init(&spec);
    double missing_rate = 0.2;
    double max_block_frac = 0.05;
    synth->add_option("--pattern", pattern, "A (one regime) or B (two regimes)")
        ->check(CLI::IsMember({"A", "B"}))
        ->capture_default_str();
    synth->add_option("--out", synth_out, "Output directory")->capture_default_str();
    synth->add_option("--timesteps", spec.num_steps, "Series length T")->capture_default_str();
    synth->add_option("--features", spec.num_features, "Feature count N")->capture_default_str();
    synth->add_option("--latent-dim", spec.latent_dim, "Latent dimension L")
        ->capture_default_str();
    synth->add_option("--switch-period", spec.switch_period, "Regime switch period (pattern B)")
        ->capture_default_str();
    synth->add_option("--missing-rate", missing_rate, "Target missing fraction")
        ->capture_default_str();
    synth->add_option("--max-block-frac", max_block_frac, "Missing block length cap as a fraction of T")
        ->capture_default_str();
    synth->add_option("--seed", spec.seed, "Random seed")->capture_default_str();

    // eval
    auto* eval = app.add_subcommand("eval", "Score an imputation against ground truth");
    std::string truth_path, imputed_path, mask_path, eval_mask_path;
    std::string truth_regimes_path, est_regimes_path;
    int32_t eval_regimes = 0;
    eval->add_option("--truth", truth_path, "Ground truth CSV")->required();
    eval->add_option("--imputed", imputed_path, "Imputed CSV")->required();
    eval->add_option("--mask", mask_path, "Observation mask CSV (0 = hidden, scored)");
    eval->add_option("--eval-mask", eval_mask_path, "Explicit evaluation mask CSV (1 = scored)");
    eval->add_option("--truth-regimes", truth_regimes_path, "True regimes CSV");
    eval->add_option("--est-regimes", est_regimes_path, "Estimated regimes CSV");
    eval->add_option("--num-regimes", eval_regimes, "Regime count (default: inferred)");

    // bench
    auto* bench = app.add_subcommand("bench", "Per-iteration runtime across series lengths");
    std::vector<int64_t> t_values = {1000, 2000, 4000, 8000};
    int64_t bench_features = 50;
    int32_t bench_latent = 10;
    int32_t bench_regimes = 1;
    double bench_missing = 0.2;
    int bench_iters = 5;
    uint64_t bench_seed = 0;
    int32_t bench_threads = 0;
    bench->add_option("--t-values", t_values, "Series lengths to time")->capture_default_str();
    bench->add_option("--features", bench_features, "Feature count N")->capture_default_str();
    bench->add_option("--latent-dim", bench_latent, "Latent dimension L")->capture_default_str();
    bench->add_option("--num-regimes", bench_regimes, "Regime count K")->capture_default_str();
    bench->add_option("--missing-rate", bench_missing, "Missing fraction")->capture_default_str();
    bench->add_option("--iters", bench_iters, "EM iterations to time")->capture_default_str();
    bench->add_option("--seed", bench_seed, "Random seed")->capture_default_str();
    bench->add_option("--threads", bench_threads, "Worker threads (0 = auto)")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (impute->parsed())
        return run_impute(input, out_dir, hyper, no_zscore, edge_threshold, export_dot);
    if (synth->parsed())
        return run_synth(pattern[0], synth_out, spec, missing_rate, max_block_frac);
    if (eval->parsed())
        return run_eval(truth_path, imputed_path, mask_path, eval_mask_path, truth_regimes_path,
                        est_regimes_path, eval_regimes);
    if (bench->parsed())
        return run_bench(t_values, bench_features, bench_latent, bench_regimes, bench_missing,
                         bench_iters, bench_seed, bench_threads);
    return kExitInput;
}
