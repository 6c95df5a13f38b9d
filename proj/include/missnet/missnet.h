/* missnet: missing value imputation for multivariate time series by switching
 * sparse-network state-space modeling.
 *
 * All matrices cross this boundary in column-major order. A series is
 * N features x T timesteps: values[i + j*N] is feature i at timestep j.
 * Functions returning missnet_status report failure details through
 * missnet_last_error(), which is thread-local.
 */
#ifndef MISSNET_H
#define MISSNET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MISSNET_API __declspec(dllexport)
#else
#define MISSNET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum missnet_status {
    MISSNET_OK = 0,
    MISSNET_ERR_ARGUMENT = 1, /* invalid argument or shape */
    MISSNET_ERR_PARSE = 2,    /* malformed input file */
    MISSNET_ERR_NUMERIC = 3,  /* numerical failure while fitting */
    MISSNET_ERR_IO = 4        /* filesystem failure */
} missnet_status;

MISSNET_API const char* missnet_status_name(missnet_status status);
MISSNET_API const char* missnet_last_error(void);
MISSNET_API const char* missnet_version(void);

typedef struct missnet_series missnet_series;
typedef struct missnet_model missnet_model;
typedef struct missnet_dataset missnet_dataset;

/* ------------------------------------------------------------------ */
/* series                                                              */

MISSNET_API missnet_status missnet_series_create(int64_t num_features, int64_t num_steps,
                                                 const double* values, const uint8_t* mask,
                                                 missnet_series** out);
MISSNET_API missnet_status missnet_series_from_csv(const char* path, missnet_series** out);
MISSNET_API void missnet_series_free(missnet_series* series);

MISSNET_API int64_t missnet_series_num_features(const missnet_series* series);
MISSNET_API int64_t missnet_series_num_steps(const missnet_series* series);
MISSNET_API missnet_status missnet_series_copy_values(const missnet_series* series, double* out);
MISSNET_API missnet_status missnet_series_copy_mask(const missnet_series* series, uint8_t* out);
MISSNET_API const char* missnet_series_feature_name(const missnet_series* series, int64_t index);
MISSNET_API missnet_status missnet_series_set_feature_name(missnet_series* series, int64_t index,
                                                           const char* name);

/* Writes header + one row per timestep; masked-out cells are blank. */
MISSNET_API missnet_status missnet_series_write_csv(const missnet_series* series,
                                                    const char* path);

/* Per-feature standardization over observed entries (std floored at 1e-8).
 * means/stds may be NULL; otherwise they receive N entries. */
MISSNET_API missnet_status missnet_series_zscore(const missnet_series* series,
                                                 missnet_series** out, double* means,
                                                 double* stds);

/* ------------------------------------------------------------------ */
/* fitting                                                             */

typedef struct missnet_hyperparams {
    int32_t latent_dim;   /* L, default 10 */
    int32_t num_regimes;  /* K, default 1 */
    double alpha;         /* inter-correlation weight in [0,1], default 0.5 */
    double lambda;        /* network sparsity penalty >= 0, default 1.0 */
    int32_t max_iter;     /* default 50 */
    double tol;           /* relative objective change, default 1e-4 */
    uint64_t seed;        /* default 0 */
    int32_t restarts;     /* default 1 */
    int32_t threads;      /* 0 = auto */
} missnet_hyperparams;

MISSNET_API void missnet_hyperparams_init(missnet_hyperparams* params);

MISSNET_API missnet_status missnet_fit(const missnet_series* series,
                                       const missnet_hyperparams* params, missnet_model** out);
MISSNET_API void missnet_model_free(missnet_model* model);

MISSNET_API int64_t missnet_model_num_features(const missnet_model* model);
MISSNET_API int64_t missnet_model_num_steps(const missnet_model* model);
MISSNET_API int32_t missnet_model_num_regimes(const missnet_model* model);

/* N*T imputed matrix; observed cells pass through unchanged. */
MISSNET_API missnet_status missnet_model_copy_imputed(const missnet_model* model, double* out);
/* T regime assignments in [0, K). */
MISSNET_API missnet_status missnet_model_copy_regime_path(const missnet_model* model,
                                                          int32_t* out);
/* N*N per-regime matrices. */
MISSNET_API missnet_status missnet_model_copy_precision(const missnet_model* model,
                                                        int32_t regime, double* out);
MISSNET_API missnet_status missnet_model_copy_partial_correlation(const missnet_model* model,
                                                                  int32_t regime, double* out);
MISSNET_API missnet_status missnet_model_copy_regime_mean(const missnet_model* model,
                                                          int32_t regime, double* out);

/* fit report */
MISSNET_API int32_t missnet_model_iterations(const missnet_model* model);
MISSNET_API int32_t missnet_model_converged(const missnet_model* model);
MISSNET_API missnet_status missnet_model_objective_trace(const missnet_model* model, double* out);
MISSNET_API missnet_status missnet_model_iteration_seconds(const missnet_model* model,
                                                           double* out);
MISSNET_API missnet_status missnet_model_regime_counts(const missnet_model* model, int64_t* out);
MISSNET_API int32_t missnet_model_warning_count(const missnet_model* model);
MISSNET_API const char* missnet_model_warning(const missnet_model* model, int32_t index);

/* ------------------------------------------------------------------ */
/* synthetic data                                                      */

typedef struct missnet_synth_spec {
    int64_t num_steps;     /* default 1000 */
    int64_t num_features;  /* default 50 */
    int32_t latent_dim;    /* default 10 */
    int32_t num_regimes;   /* default by pattern: A=1, B=2 */
    int64_t switch_period; /* default 200 */
    uint64_t seed;         /* default 0 */
} missnet_synth_spec;

MISSNET_API void missnet_synth_spec_init(missnet_synth_spec* spec);

/* pattern is 'A' (one regime) or 'B' (two regimes alternating every
 * switch_period steps). */
MISSNET_API missnet_status missnet_synth_generate(const missnet_synth_spec* spec, char pattern,
                                                  missnet_dataset** out);
MISSNET_API void missnet_dataset_free(missnet_dataset* dataset);

MISSNET_API int64_t missnet_dataset_num_features(const missnet_dataset* dataset);
MISSNET_API int64_t missnet_dataset_num_steps(const missnet_dataset* dataset);
MISSNET_API missnet_status missnet_dataset_copy_clean(const missnet_dataset* dataset, double* out);
MISSNET_API missnet_status missnet_dataset_copy_true_path(const missnet_dataset* dataset,
                                                          int32_t* out);
MISSNET_API const char* missnet_dataset_rng_id(const missnet_dataset* dataset);

/* Random missing blocks (per-feature, length up to max_block_frac*T,
 * overlaps allowed) until the missing fraction reaches target_rate. */
MISSNET_API missnet_status missnet_dataset_inject_missing(const missnet_dataset* dataset,
                                                          double target_rate,
                                                          double max_block_frac, uint64_t seed,
                                                          missnet_series** out);

/* ------------------------------------------------------------------ */
/* evaluation                                                          */

MISSNET_API missnet_status missnet_rmse(int64_t num_features, int64_t num_steps,
                                        const double* truth, const double* imputed,
                                        const uint8_t* eval_mask, double* out);

MISSNET_API missnet_status missnet_regime_accuracy(int64_t num_steps, const int32_t* true_path,
                                                   const int32_t* est_path, int32_t num_regimes,
                                                   double* out);

#ifdef __cplusplus
}
#endif

#endif /* MISSNET_H */
