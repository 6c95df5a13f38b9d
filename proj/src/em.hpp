#pragma once

#include <functional>
#include <string>
#include <vector>

#include "contextual.hpp"
#include "linalg.hpp"
#include "types.hpp"

namespace missnet {

struct FitReport {
    int iterations = 0;
    std::vector<double> objective_trace;
    bool converged = false;
    std::vector<Eigen::Index> regime_counts;
    std::vector<std::string> warnings;
    std::vector<double> iteration_seconds;
};

struct FitResult {
    ModelParams params;
    LatentFactors latents;
    SmoothedPosterior smoothed;
    Matrix imputed;  // N x T; equals observed values wherever mask = 1
    FitReport report;
};

struct InitState {
    ModelParams params;
    LatentFactors latents;
    Matrix imputed;
    std::vector<std::string> warnings;
};

// Linear-interpolation imputation plus deterministic parameter seeding; all
// randomness comes from hyper.seed.
InitState initialize(const PartialSeries& series, const Hyperparams& hyper);

struct DynamicsUpdate {
    Matrix B;
    Vector z0;
    Matrix psi0;
    double var_z;
    std::vector<double> var_x;
    std::vector<double> var_s;
    std::vector<double> var_v;
};

// Closed-form M-step for the latent dynamics and all noise variances.
// Variances are floored at 1e-8; a regime with no observed entries keeps its
// previous var_x and records a warning.
DynamicsUpdate m_step_dynamics(const SmoothedPosterior& smoothed, const RegimePath& path,
                               const PartialSeries& series, const std::vector<Matrix>& U,
                               const std::vector<ContextualPosterior>& ctx,
                               const std::vector<Matrix>& S, const ModelParams& prev,
                               std::vector<std::string>* warnings = nullptr);

struct RegimeUpdate {
    Vector pi;
    Matrix markov;
};

// Transition counting with Laplace smoothing (eps = 1e-3) and column renormalization.
RegimeUpdate m_step_regimes(const RegimePath& path, int num_regimes);

// X_hat[:,t] = observed values where masked in, U^{(F_t)} * smoothed mean elsewhere.
Matrix impute(const PartialSeries& series, const RegimePath& path, const std::vector<Matrix>& U,
              const Matrix& smoothed_means);

// Per-regime empirical mean + graphical lasso on the imputed columns of each
// regime, warm-started from the previous precision. The per-sample penalty is
// 2*lambda/M_k; cov_ridge scales a trace-proportional diagonal ridge that
// keeps the problem well posed on rank-deficient data. Empty regimes keep
// their previous network.
std::vector<Network> m_step_networks(const Matrix& imputed, const RegimePath& path, double lambda,
                                     const GlassoConfig& cfg, const std::vector<Network>& previous,
                                     std::vector<std::string>* warnings = nullptr, int threads = 1,
                                     double cov_ridge = 1e-3);

// Joint log-probability at the current point estimates minus
// lambda * sum_k ||precision_k||_od,1.
double penalized_objective(const PartialSeries& series, const ModelParams& params,
                           const LatentFactors& latents, const Matrix& imputed, double lambda);

struct IterationState {
    int iteration;
    const ModelParams& params;
    const LatentFactors& latents;
    const SmoothedPosterior& smoothed;
    const Matrix& imputed;
    double objective;
};
using IterationHook = std::function<void(const IterationState&)>;

// Full EM alternation; returns the iterate with the best penalized objective.
// A warm start replaces the built-in initialization (restarts are ignored in
// that case so the run stays a deterministic function of the given state).
FitResult fit(const PartialSeries& series, const Hyperparams& hyper,
              const IterationHook& hook = {}, const InitState* warm_start = nullptr);

struct RegimeSweepEntry {
    int num_regimes = 0;
    double validation_rmse = 0.0;
    bool converged = false;
};

struct RegimeSweepResult {
    std::vector<RegimeSweepEntry> entries;
    int best_num_regimes = 0;
};

// Refits once per candidate K with an extra held-out missing mask and scores
// validation RMSE on the held-out cells.
RegimeSweepResult select_num_regimes(const PartialSeries& series, const Hyperparams& base,
                                     const std::vector<int>& candidates,
                                     double holdout_rate = 0.10);

}  // namespace missnet
