#include "missnet/missnet.h"

#include <cstring>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include "em.hpp"
#include "errors.hpp"
#include "evaluation.hpp"
#include "io.hpp"
#include "synth.hpp"
#include "types.hpp"

struct missnet_series {
    missnet::PartialSeries series;
    std::vector<std::string> names;
};

struct missnet_model {
    missnet::FitResult result;
};

struct missnet_dataset {
    missnet::SynthDataset data;
};

namespace {

thread_local std::string g_last_error;

missnet_status fail(missnet_status status, const char* what) {
    g_last_error = what;
    return status;
}

template <typename Fn>
missnet_status wrap(Fn&& fn) {
    try {
        fn();
        return MISSNET_OK;
    } catch (const missnet::ParseError& e) {
        return fail(MISSNET_ERR_PARSE, e.what());
    } catch (const missnet::NumericError& e) {
        return fail(MISSNET_ERR_NUMERIC, e.what());
    } catch (const missnet::IoError& e) {
        return fail(MISSNET_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(MISSNET_ERR_ARGUMENT, e.what());
    }
}

missnet_status require(bool ok, const char* what) {
    return ok ? MISSNET_OK : fail(MISSNET_ERR_ARGUMENT, what);
}

missnet::Hyperparams to_hyperparams(const missnet_hyperparams& p) {
    missnet::Hyperparams h;
    h.latent_dim = p.latent_dim;
    h.num_regimes = p.num_regimes;
    h.alpha = p.alpha;
    h.lambda = p.lambda;
    h.max_iter = p.max_iter;
    h.tol = p.tol;
    h.seed = p.seed;
    h.n_restarts = p.restarts;
    h.threads = p.threads;
    return h;
}

}  // namespace

extern "C" {

const char* missnet_status_name(missnet_status status) {
    switch (status) {
        case MISSNET_OK: return "ok";
        case MISSNET_ERR_ARGUMENT: return "invalid argument";
        case MISSNET_ERR_PARSE: return "parse error";
        case MISSNET_ERR_NUMERIC: return "numeric error";
        case MISSNET_ERR_IO: return "io error";
    }
    return "unknown";
}

const char* missnet_last_error(void) { return g_last_error.c_str(); }

const char* missnet_version(void) { return "0.1.0"; }

missnet_status missnet_series_create(int64_t num_features, int64_t num_steps,
                                     const double* values, const uint8_t* mask,
                                     missnet_series** out) {
    if (missnet_status s = require(out && values && mask, "null pointer"); s != MISSNET_OK)
        return s;
    return wrap([&] {
        if (num_features < 1 || num_steps < 2)
            throw std::invalid_argument("series must be at least 1 x 2");
        missnet::Matrix v =
            Eigen::Map<const missnet::Matrix>(values, num_features, num_steps);
        missnet::MaskMatrix m =
            Eigen::Map<const missnet::MaskMatrix>(mask, num_features, num_steps);
        *out = new missnet_series{missnet::PartialSeries(std::move(v), std::move(m)),
                                  missnet::default_feature_names(num_features)};
    });
}

missnet_status missnet_series_from_csv(const char* path, missnet_series** out) {
    if (missnet_status s = require(out && path, "null pointer"); s != MISSNET_OK) return s;
    return wrap([&] {
        missnet::NamedSeries named = missnet::read_series_csv(path);
        *out = new missnet_series{std::move(named.series), std::move(named.names)};
    });
}

void missnet_series_free(missnet_series* series) { delete series; }

int64_t missnet_series_num_features(const missnet_series* series) {
    return series ? series->series.num_features() : 0;
}

int64_t missnet_series_num_steps(const missnet_series* series) {
    return series ? series->series.num_steps() : 0;
}

missnet_status missnet_series_copy_values(const missnet_series* series, double* out) {
    if (missnet_status s = require(series && out, "null pointer"); s != MISSNET_OK) return s;
    const missnet::Matrix& v = series->series.values();
    std::memcpy(out, v.data(), sizeof(double) * static_cast<std::size_t>(v.size()));
    return MISSNET_OK;
}

missnet_status missnet_series_copy_mask(const missnet_series* series, uint8_t* out) {
    if (missnet_status s = require(series && out, "null pointer"); s != MISSNET_OK) return s;
    const missnet::MaskMatrix& m = series->series.mask();
    std::memcpy(out, m.data(), sizeof(uint8_t) * static_cast<std::size_t>(m.size()));
    return MISSNET_OK;
}

const char* missnet_series_feature_name(const missnet_series* series, int64_t index) {
    if (!series || index < 0 || index >= static_cast<int64_t>(series->names.size()))
        return nullptr;
    return series->names[static_cast<std::size_t>(index)].c_str();
}

missnet_status missnet_series_set_feature_name(missnet_series* series, int64_t index,
                                               const char* name) {
    if (missnet_status s = require(series && name, "null pointer"); s != MISSNET_OK) return s;
    if (index < 0 || index >= static_cast<int64_t>(series->names.size()))
        return fail(MISSNET_ERR_ARGUMENT, "feature index out of range");
    series->names[static_cast<std::size_t>(index)] = name;
    return MISSNET_OK;
}

missnet_status missnet_series_write_csv(const missnet_series* series, const char* path) {
    if (missnet_status s = require(series && path, "null pointer"); s != MISSNET_OK) return s;
    return wrap([&] {
        const missnet::MaskMatrix& mask = series->series.mask();
        missnet::write_series_csv(path, series->series.values(), series->names, &mask);
    });
}

missnet_status missnet_series_zscore(const missnet_series* series, missnet_series** out,
                                     double* means, double* stds) {
    if (missnet_status s = require(series && out, "null pointer"); s != MISSNET_OK) return s;
    return wrap([&] {
        missnet::ZScoreResult r = missnet::zscore(series->series);
        if (means)
            std::memcpy(means, r.stats.mean.data(),
                        sizeof(double) * static_cast<std::size_t>(r.stats.mean.size()));
        if (stds)
            std::memcpy(stds, r.stats.stdev.data(),
                        sizeof(double) * static_cast<std::size_t>(r.stats.stdev.size()));
        *out = new missnet_series{std::move(r.series), series->names};
    });
}

void missnet_hyperparams_init(missnet_hyperparams* params) {
    if (!params) return;
    params->latent_dim = 10;
    params->num_regimes = 1;
    params->alpha = 0.5;
    params->lambda = 1.0;
    params->max_iter = 50;
    params->tol = 1e-4;
    params->seed = 0;
    params->restarts = 1;
    params->threads = 0;
}

missnet_status missnet_fit(const missnet_series* series, const missnet_hyperparams* params,
                           missnet_model** out) {
    if (missnet_status s = require(series && params && out, "null pointer"); s != MISSNET_OK)
        return s;
    return wrap([&] {
        *out = new missnet_model{missnet::fit(series->series, to_hyperparams(*params))};
    });
}

void missnet_model_free(missnet_model* model) { delete model; }

int64_t missnet_model_num_features(const missnet_model* model) {
    return model ? model->result.imputed.rows() : 0;
}

int64_t missnet_model_num_steps(const missnet_model* model) {
    return model ? model->result.imputed.cols() : 0;
}

int32_t missnet_model_num_regimes(const missnet_model* model) {
    return model ? model->result.params.num_regimes() : 0;
}

missnet_status missnet_model_copy_imputed(const missnet_model* model, double* out) {
    if (missnet_status s = require(model && out, "null pointer"); s != MISSNET_OK) return s;
    const missnet::Matrix& m = model->result.imputed;
    std::memcpy(out, m.data(), sizeof(double) * static_cast<std::size_t>(m.size()));
    return MISSNET_OK;
}

missnet_status missnet_model_copy_regime_path(const missnet_model* model, int32_t* out) {
    if (missnet_status s = require(model && out, "null pointer"); s != MISSNET_OK) return s;
    const missnet::RegimePath& path = model->result.latents.F;
    for (std::size_t t = 0; t < path.size(); ++t) out[t] = path[t];
    return MISSNET_OK;
}

namespace {

missnet_status copy_regime_matrix(const missnet_model* model, int32_t regime, double* out,
                                  bool partial_corr) {
    if (missnet_status s = require(model && out, "null pointer"); s != MISSNET_OK) return s;
    if (regime < 0 || regime >= model->result.params.num_regimes())
        return fail(MISSNET_ERR_ARGUMENT, "regime index out of range");
    const missnet::Matrix& m =
        partial_corr ? model->result.latents.S[static_cast<std::size_t>(regime)]
                     : model->result.params.networks[static_cast<std::size_t>(regime)].precision;
    std::memcpy(out, m.data(), sizeof(double) * static_cast<std::size_t>(m.size()));
    return MISSNET_OK;
}

}  // namespace

missnet_status missnet_model_copy_precision(const missnet_model* model, int32_t regime,
                                            double* out) {
    return copy_regime_matrix(model, regime, out, false);
}

missnet_status missnet_model_copy_partial_correlation(const missnet_model* model, int32_t regime,
                                                      double* out) {
    return copy_regime_matrix(model, regime, out, true);
}

missnet_status missnet_model_copy_regime_mean(const missnet_model* model, int32_t regime,
                                              double* out) {
    if (missnet_status s = require(model && out, "null pointer"); s != MISSNET_OK) return s;
    if (regime < 0 || regime >= model->result.params.num_regimes())
        return fail(MISSNET_ERR_ARGUMENT, "regime index out of range");
    const missnet::Vector& mean =
        model->result.params.networks[static_cast<std::size_t>(regime)].mean;
    std::memcpy(out, mean.data(), sizeof(double) * static_cast<std::size_t>(mean.size()));
    return MISSNET_OK;
}

int32_t missnet_model_iterations(const missnet_model* model) {
    return model ? model->result.report.iterations : 0;
}

int32_t missnet_model_converged(const missnet_model* model) {
    return model && model->result.report.converged ? 1 : 0;
}

missnet_status missnet_model_objective_trace(const missnet_model* model, double* out) {
    if (missnet_status s = require(model && out, "null pointer"); s != MISSNET_OK) return s;
    const auto& trace = model->result.report.objective_trace;
    for (std::size_t i = 0; i < trace.size(); ++i) out[i] = trace[i];
    return MISSNET_OK;
}

missnet_status missnet_model_iteration_seconds(const missnet_model* model, double* out) {
    if (missnet_status s = require(model && out, "null pointer"); s != MISSNET_OK) return s;
    const auto& secs = model->result.report.iteration_seconds;
    for (std::size_t i = 0; i < secs.size(); ++i) out[i] = secs[i];
    return MISSNET_OK;
}

missnet_status missnet_model_regime_counts(const missnet_model* model, int64_t* out) {
    if (missnet_status s = require(model && out, "null pointer"); s != MISSNET_OK) return s;
    const auto& counts = model->result.report.regime_counts;
    for (std::size_t i = 0; i < counts.size(); ++i) out[i] = counts[i];
    return MISSNET_OK;
}

int32_t missnet_model_warning_count(const missnet_model* model) {
    return model ? static_cast<int32_t>(model->result.report.warnings.size()) : 0;
}

const char* missnet_model_warning(const missnet_model* model, int32_t index) {
    if (!model || index < 0 ||
        index >= static_cast<int32_t>(model->result.report.warnings.size()))
        return nullptr;
    return model->result.report.warnings[static_cast<std::size_t>(index)].c_str();
}

void missnet_synth_spec_init(missnet_synth_spec* spec) {
    if (!spec) return;
    spec->num_steps = 1000;
    spec->num_features = 50;
    spec->latent_dim = 10;
    spec->num_regimes = 0; /* resolved by pattern */
    spec->switch_period = 200;
    spec->seed = 0;
}

missnet_status missnet_synth_generate(const missnet_synth_spec* spec, char pattern,
                                      missnet_dataset** out) {
    if (missnet_status s = require(spec && out, "null pointer"); s != MISSNET_OK) return s;
    return wrap([&] {
        missnet::Pattern p;
        if (pattern == 'A' || pattern == 'a') {
            p = missnet::Pattern::A;
        } else if (pattern == 'B' || pattern == 'b') {
            p = missnet::Pattern::B;
        } else {
            throw std::invalid_argument("pattern must be 'A' or 'B'");
        }
        missnet::SynthSpec s;
        s.num_steps = spec->num_steps;
        s.num_features = spec->num_features;
        s.latent_dim = spec->latent_dim;
        s.num_regimes =
            spec->num_regimes > 0 ? spec->num_regimes : (p == missnet::Pattern::A ? 1 : 2);
        s.switch_period = spec->switch_period;
        s.seed = spec->seed;
        *out = new missnet_dataset{missnet::generate_dataset(s, p)};
    });
}

void missnet_dataset_free(missnet_dataset* dataset) { delete dataset; }

int64_t missnet_dataset_num_features(const missnet_dataset* dataset) {
    return dataset ? dataset->data.clean.rows() : 0;
}

int64_t missnet_dataset_num_steps(const missnet_dataset* dataset) {
    return dataset ? dataset->data.clean.cols() : 0;
}

missnet_status missnet_dataset_copy_clean(const missnet_dataset* dataset, double* out) {
    if (missnet_status s = require(dataset && out, "null pointer"); s != MISSNET_OK) return s;
    const missnet::Matrix& m = dataset->data.clean;
    std::memcpy(out, m.data(), sizeof(double) * static_cast<std::size_t>(m.size()));
    return MISSNET_OK;
}

missnet_status missnet_dataset_copy_true_path(const missnet_dataset* dataset, int32_t* out) {
    if (missnet_status s = require(dataset && out, "null pointer"); s != MISSNET_OK) return s;
    const missnet::RegimePath& path = dataset->data.true_path;
    for (std::size_t t = 0; t < path.size(); ++t) out[t] = path[t];
    return MISSNET_OK;
}

const char* missnet_dataset_rng_id(const missnet_dataset* dataset) {
    (void)dataset;
    return missnet::kRngId;
}

missnet_status missnet_dataset_inject_missing(const missnet_dataset* dataset, double target_rate,
                                              double max_block_frac, uint64_t seed,
                                              missnet_series** out) {
    if (missnet_status s = require(dataset && out, "null pointer"); s != MISSNET_OK) return s;
    return wrap([&] {
        missnet::PartialSeries series =
            missnet::inject_missing(dataset->data.clean, target_rate, max_block_frac, seed);
        *out = new missnet_series{std::move(series),
                                  missnet::default_feature_names(dataset->data.clean.rows())};
    });
}

missnet_status missnet_rmse(int64_t num_features, int64_t num_steps, const double* truth,
                            const double* imputed, const uint8_t* eval_mask, double* out) {
    if (missnet_status s = require(truth && imputed && eval_mask && out, "null pointer");
        s != MISSNET_OK)
        return s;
    return wrap([&] {
        Eigen::Map<const missnet::Matrix> t(truth, num_features, num_steps);
        Eigen::Map<const missnet::Matrix> x(imputed, num_features, num_steps);
        Eigen::Map<const missnet::MaskMatrix> m(eval_mask, num_features, num_steps);
        *out = missnet::rmse(t, x, m);
    });
}

missnet_status missnet_regime_accuracy(int64_t num_steps, const int32_t* true_path,
                                       const int32_t* est_path, int32_t num_regimes,
                                       double* out) {
    if (missnet_status s = require(true_path && est_path && out, "null pointer");
        s != MISSNET_OK)
        return s;
    return wrap([&] {
        missnet::RegimePath a(static_cast<std::size_t>(num_steps));
        missnet::RegimePath b(static_cast<std::size_t>(num_steps));
        for (int64_t t = 0; t < num_steps; ++t) {
            a[static_cast<std::size_t>(t)] = true_path[t];
            b[static_cast<std::size_t>(t)] = est_path[t];
        }
        *out = missnet::regime_accuracy(a, b, num_regimes);
    });
}

}  // extern "C"
