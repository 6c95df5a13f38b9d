#include "em.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "errors.hpp"
#include "evaluation.hpp"
#include "glasso.hpp"
#include "ssm.hpp"
#include "synth.hpp"

namespace missnet {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;
constexpr double kVarianceFloor = 1e-8;
constexpr double kMarkovSmoothing = 1e-3;
constexpr int kEmptyRegimeReseedAfter = 3;

std::vector<Eigen::Index> regime_counts(const RegimePath& path, int num_regimes) {
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(num_regimes), 0);
    for (int f : path) counts[static_cast<std::size_t>(f)] += 1;
    return counts;
}

Matrix interpolate_linear(const PartialSeries& series, std::vector<std::string>* warnings) {
    const Eigen::Index n = series.num_features();
    const Eigen::Index t_len = series.num_steps();
    Matrix out = Matrix::Zero(n, t_len);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<Eigen::Index> obs;
        for (Eigen::Index t = 0; t < t_len; ++t)
            if (series.observed(i, t)) obs.push_back(t);
        if (obs.empty()) {
            if (warnings)
                warnings->push_back("initialize: feature " + std::to_string(i) +
                                    " has no observed values; interpolated as zeros");
            continue;
        }
        for (Eigen::Index t = 0; t < obs.front(); ++t) out(i, t) = series.values()(i, obs.front());
        for (Eigen::Index t = obs.back(); t < t_len; ++t) out(i, t) = series.values()(i, obs.back());
        for (std::size_t s = 0; s + 1 < obs.size(); ++s) {
            const Eigen::Index t0 = obs[s];
            const Eigen::Index t1 = obs[s + 1];
            const double v0 = series.values()(i, t0);
            const double v1 = series.values()(i, t1);
            out(i, t0) = v0;
            for (Eigen::Index t = t0 + 1; t < t1; ++t) {
                const double w = static_cast<double>(t - t0) / static_cast<double>(t1 - t0);
                out(i, t) = v0 + w * (v1 - v0);
            }
        }
        out(i, obs.back()) = series.values()(i, obs.back());
    }
    return out;
}

int resolve_threads(int requested, int num_regimes) {
    if (requested > 0) return std::min(requested, num_regimes);
    const unsigned hw = std::thread::hardware_concurrency();
    return std::max(1, std::min<int>(num_regimes, hw == 0 ? 1 : static_cast<int>(hw)));
}

}  // namespace

InitState initialize(const PartialSeries& series, const Hyperparams& hyper) {
    hyper.validate();
    const Eigen::Index n = series.num_features();
    const Eigen::Index t_len = series.num_steps();
    const int L = hyper.latent_dim;
    const int K = hyper.num_regimes;

    InitState state;
    state.imputed = interpolate_linear(series, &state.warnings);

    std::mt19937_64 rng(hyper.seed);
    std::normal_distribution<double> unit_normal(0.0, 1.0);

    ModelParams& p = state.params;
    p.B = Matrix::Identity(L, L);
    for (Eigen::Index j = 0; j < L; ++j)
        for (Eigen::Index i = 0; i < L; ++i) p.B(i, j) += 0.01 * unit_normal(rng);
    p.z0 = Vector::Zero(L);
    p.psi0 = Matrix::Identity(L, L);
    p.var_z = 1.0;
    p.var_x.assign(static_cast<std::size_t>(K), 1.0);
    p.var_s.assign(static_cast<std::size_t>(K), 1.0);
    p.var_v.assign(static_cast<std::size_t>(K), 1.0);

    const Vector global_mean = state.imputed.rowwise().mean();
    p.networks.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
        p.networks[static_cast<std::size_t>(k)] = {Matrix::Identity(n, n), global_mean};

    p.pi = Vector::Constant(K, 1.0 / static_cast<double>(K));
    if (K == 1) {
        p.markov = Matrix::Constant(1, 1, 1.0);
    } else {
        p.markov = Matrix::Constant(K, K, 0.1 / static_cast<double>(K - 1));
        p.markov.diagonal().setConstant(0.9);
    }

    LatentFactors& lat = state.latents;
    lat.Z = Matrix::Zero(L, t_len);
    lat.V.assign(static_cast<std::size_t>(K), Matrix::Zero(L, n));
    lat.U.resize(static_cast<std::size_t>(K));
    const double u_scale = 1.0 / std::sqrt(static_cast<double>(L));
    for (int k = 0; k < K; ++k) {
        Matrix u(n, L);
        for (Eigen::Index j = 0; j < L; ++j)
            for (Eigen::Index i = 0; i < n; ++i) u(i, j) = u_scale * unit_normal(rng);
        lat.U[static_cast<std::size_t>(k)] = std::move(u);
    }
    lat.S.assign(static_cast<std::size_t>(K), Matrix::Identity(n, n));
    lat.F.resize(static_cast<std::size_t>(t_len));
    for (Eigen::Index t = 0; t < t_len; ++t)
        lat.F[static_cast<std::size_t>(t)] =
            std::min<int>(K - 1, static_cast<int>((t * K) / t_len));

    return state;
}

DynamicsUpdate m_step_dynamics(const SmoothedPosterior& smoothed, const RegimePath& path,
                               const PartialSeries& series, const std::vector<Matrix>& U,
                               const std::vector<ContextualPosterior>& ctx,
                               const std::vector<Matrix>& S, const ModelParams& prev,
                               std::vector<std::string>* warnings) {
    const Eigen::Index T = smoothed.num_steps();
    const Eigen::Index L = smoothed.mean.rows();
    const Eigen::Index N = series.num_features();
    const int K = prev.num_regimes();

    DynamicsUpdate up;

    Matrix sum_second_from2 = Matrix::Zero(L, L);   // sum_{t>=2} E[z_t z_t']
    Matrix sum_second_to_tm1 = Matrix::Zero(L, L);  // sum_{t>=2} E[z_{t-1} z_{t-1}']
    Matrix sum_cross = Matrix::Zero(L, L);          // sum_{t>=2} E[z_t z_{t-1}']
    for (Eigen::Index t = 1; t < T; ++t) {
        sum_second_from2 += smoothed.second[static_cast<std::size_t>(t)];
        sum_second_to_tm1 += smoothed.second[static_cast<std::size_t>(t - 1)];
        sum_cross += smoothed.cross[static_cast<std::size_t>(t)];
    }

    if (T >= 2) {
        SpdFactor denom(sum_second_to_tm1, "m_step_dynamics: transition denominator");
        up.B = denom.solve(sum_cross.transpose()).transpose();
        up.var_z = std::max(
            (sum_second_from2 - up.B * sum_cross.transpose()).trace() /
                (static_cast<double>(T - 1) * static_cast<double>(L)),
            kVarianceFloor);
    } else {
        up.B = prev.B;
        up.var_z = prev.var_z;
    }

    up.z0 = smoothed.mean.col(0);
    up.psi0 = symmetrized(smoothed.cov[0]);
    up.psi0.diagonal().array() += kVarianceFloor;  // keeps the prior nondegenerate

    up.var_x.assign(static_cast<std::size_t>(K), 0.0);
    up.var_s.assign(static_cast<std::size_t>(K), 0.0);
    up.var_v.assign(static_cast<std::size_t>(K), 0.0);

    std::vector<double> obs_count(static_cast<std::size_t>(K), 0.0);
    std::vector<double> resid(static_cast<std::size_t>(K), 0.0);
    for (Eigen::Index t = 0; t < T; ++t) {
        const int k = path[static_cast<std::size_t>(t)];
        const ObservedSlice slice = observed_slice(series, t);
        if (slice.empty()) continue;
        const Matrix u_obs = select_rows(U[static_cast<std::size_t>(k)], slice);
        obs_count[static_cast<std::size_t>(k)] += static_cast<double>(slice.size());
        const Vector fitted = u_obs * smoothed.mean.col(t);
        resid[static_cast<std::size_t>(k)] +=
            slice.values.squaredNorm() - 2.0 * slice.values.dot(fitted) +
            (u_obs * smoothed.second[static_cast<std::size_t>(t)]).cwiseProduct(u_obs).sum();
    }
    for (int k = 0; k < K; ++k) {
        if (obs_count[static_cast<std::size_t>(k)] > 0.0) {
            up.var_x[static_cast<std::size_t>(k)] =
                std::max(resid[static_cast<std::size_t>(k)] / obs_count[static_cast<std::size_t>(k)],
                         kVarianceFloor);
        } else {
            up.var_x[static_cast<std::size_t>(k)] = prev.var_x[static_cast<std::size_t>(k)];
            if (warnings)
                warnings->push_back("m_step_dynamics: regime " + std::to_string(k) +
                                    " has no observed entries; var_x kept");
        }
    }

    for (int k = 0; k < K; ++k) {
        const Matrix& u = U[static_cast<std::size_t>(k)];
        const ContextualPosterior& post = ctx[static_cast<std::size_t>(k)];
        const Matrix& s = S[static_cast<std::size_t>(k)];
        const Matrix second_sum = post.second_moment_sum();
        const double fit_term = s.squaredNorm() - 2.0 * s.cwiseProduct(u * post.mean).sum() +
                                (u * second_sum).cwiseProduct(u).sum();
        up.var_s[static_cast<std::size_t>(k)] =
            std::max(fit_term / static_cast<double>(N * N), kVarianceFloor);
        up.var_v[static_cast<std::size_t>(k)] =
            std::max(second_sum.trace() / static_cast<double>(N * L), kVarianceFloor);
    }
    return up;
}

RegimeUpdate m_step_regimes(const RegimePath& path, int num_regimes) {
    if (path.empty()) throw std::invalid_argument("m_step_regimes: empty path");
    validate_regime_path(path, num_regimes, static_cast<Eigen::Index>(path.size()));
    const int K = num_regimes;
    const double eps = kMarkovSmoothing;

    RegimeUpdate up;
    up.pi = Vector::Constant(K, eps);
    up.pi(path.front()) += 1.0;
    up.pi /= up.pi.sum();

    Matrix counts = Matrix::Zero(K, K);
    for (std::size_t t = 1; t < path.size(); ++t) counts(path[t], path[t - 1]) += 1.0;
    up.markov = counts.array() + eps;
    for (int l = 0; l < K; ++l) up.markov.col(l) /= up.markov.col(l).sum();
    return up;
}

Matrix impute(const PartialSeries& series, const RegimePath& path, const std::vector<Matrix>& U,
              const Matrix& smoothed_means) {
    const Eigen::Index n = series.num_features();
    const Eigen::Index t_len = series.num_steps();
    validate_regime_path(path, static_cast<int>(U.size()), t_len);
    Matrix out(n, t_len);
    for (Eigen::Index t = 0; t < t_len; ++t) {
        const Vector predicted =
            U[static_cast<std::size_t>(path[static_cast<std::size_t>(t)])] * smoothed_means.col(t);
        for (Eigen::Index i = 0; i < n; ++i)
            out(i, t) = series.observed(i, t) ? series.values()(i, t) : predicted(i);
    }
    return out;
}

std::vector<Network> m_step_networks(const Matrix& imputed, const RegimePath& path, double lambda,
                                     const GlassoConfig& cfg, const std::vector<Network>& previous,
                                     std::vector<std::string>* warnings, int threads,
                                     double cov_ridge) {
    const int K = static_cast<int>(previous.size());
    const Eigen::Index t_len = imputed.cols();
    validate_regime_path(path, K, t_len);

    std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(K));
    for (Eigen::Index t = 0; t < t_len; ++t)
        members[static_cast<std::size_t>(path[static_cast<std::size_t>(t)])].push_back(t);

    std::vector<Network> out(static_cast<std::size_t>(K));
    std::vector<std::string> local_warnings(static_cast<std::size_t>(K));

    auto solve_regime = [&](int k) {
        const auto& cols = members[static_cast<std::size_t>(k)];
        if (cols.empty()) {
            out[static_cast<std::size_t>(k)] = previous[static_cast<std::size_t>(k)];
            local_warnings[static_cast<std::size_t>(k)] =
                "m_step_networks: regime " + std::to_string(k) + " empty; network kept";
            return;
        }
        Matrix samples(imputed.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) samples.col(static_cast<Eigen::Index>(c)) = imputed.col(cols[c]);
        auto [mean, cov] = empirical_moments(samples);
        // trace-scaled ridge: keeps the network likelihood bounded when the
        // imputed data is (near-)rank-deficient within a regime
        cov.diagonal().array() += cov_ridge * cov.trace() / static_cast<double>(cov.rows());
        // per-sample scale of the off-diagonal l1 penalty
        const double lambda_eff = 2.0 * lambda / static_cast<double>(cols.size());
        GlassoResult res = graphical_lasso(cov, lambda_eff, cfg,
                                           previous[static_cast<std::size_t>(k)].precision);
        if (!res.converged)
            local_warnings[static_cast<std::size_t>(k)] =
                "m_step_networks: regime " + std::to_string(k) + " ADMM hit max iterations";
        out[static_cast<std::size_t>(k)] = {std::move(res.precision), std::move(mean)};
    };

    const int workers = resolve_threads(threads, K);
    if (workers <= 1 || K == 1) {
        for (int k = 0; k < K; ++k) solve_regime(k);
    } else {
        std::vector<std::future<void>> futures;
        futures.reserve(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k)
            futures.push_back(std::async(std::launch::async, solve_regime, k));
        for (auto& f : futures) f.get();
    }

    if (warnings)
        for (const auto& w : local_warnings)
            if (!w.empty()) warnings->push_back(w);
    return out;
}

double penalized_objective(const PartialSeries& series, const ModelParams& params,
                           const LatentFactors& latents, const Matrix& imputed, double lambda) {
    const Eigen::Index T = series.num_steps();
    const Eigen::Index N = series.num_features();
    const Eigen::Index L = params.z0.size();
    const int K = params.num_regimes();
    const RegimePath& path = latents.F;
    double ll = 0.0;

    {  // initial state
        SpdFactor psi0(params.psi0, "objective: psi0");
        const Vector d = latents.Z.col(0) - params.z0;
        ll += -0.5 * psi0.quadratic_inv(d) - 0.5 * psi0.log_det() -
              0.5 * static_cast<double>(L) * kLog2Pi;
    }
    for (Eigen::Index t = 1; t < T; ++t) {  // temporal dependency
        const Vector d = latents.Z.col(t) - params.B * latents.Z.col(t - 1);
        ll += -0.5 * d.squaredNorm() / params.var_z -
              0.5 * static_cast<double>(L) * (kLog2Pi + std::log(params.var_z));
    }
    for (Eigen::Index t = 0; t < T; ++t) {  // observed data under the regime's observation model
        const int k = path[static_cast<std::size_t>(t)];
        const ObservedSlice slice = observed_slice(series, t);
        if (slice.empty()) continue;
        const Matrix u_obs = select_rows(latents.U[static_cast<std::size_t>(k)], slice);
        const Vector d = slice.values - u_obs * latents.Z.col(t);
        const double vx = params.var_x[static_cast<std::size_t>(k)];
        ll += -0.5 * d.squaredNorm() / vx -
              0.5 * static_cast<double>(slice.size()) * (kLog2Pi + std::log(vx));
    }
    for (int k = 0; k < K; ++k) {  // contextual factors and contextual matrix fit
        const Matrix& u = latents.U[static_cast<std::size_t>(k)];
        const Matrix& v = latents.V[static_cast<std::size_t>(k)];
        const Matrix& s = latents.S[static_cast<std::size_t>(k)];
        const double vs = params.var_s[static_cast<std::size_t>(k)];
        const double vv = params.var_v[static_cast<std::size_t>(k)];
        ll += -0.5 * v.squaredNorm() / vv -
              0.5 * static_cast<double>(N * L) * (kLog2Pi + std::log(vv));
        ll += -0.5 * (s - u * v).squaredNorm() / vs -
              0.5 * static_cast<double>(N * N) * (kLog2Pi + std::log(vs));
    }
    {  // regime switching
        const double p1 = params.pi(path.front());
        ll += p1 > 0 ? std::log(p1) : -std::numeric_limits<double>::infinity();
        for (std::size_t t = 1; t < path.size(); ++t) {
            const double p = params.markov(path[t], path[t - 1]);
            ll += p > 0 ? std::log(p) : -std::numeric_limits<double>::infinity();
        }
    }
    {  // network inference on the imputed series
        std::vector<GaussianLogLik> net;
        net.reserve(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k)
            net.emplace_back(params.networks[static_cast<std::size_t>(k)].mean,
                             params.networks[static_cast<std::size_t>(k)].precision);
        for (Eigen::Index t = 0; t < T; ++t)
            ll += net[static_cast<std::size_t>(path[static_cast<std::size_t>(t)])](imputed.col(t));
    }
    for (int k = 0; k < K; ++k)
        ll -= lambda * off_diagonal_l1(params.networks[static_cast<std::size_t>(k)].precision);
    return ll;
}

namespace {

struct BestIterate {
    double objective = -std::numeric_limits<double>::infinity();
    ModelParams params;
    LatentFactors latents;
    SmoothedPosterior smoothed;
    Matrix imputed;
    bool valid = false;
};

FitResult fit_once(const PartialSeries& series, const Hyperparams& hyper, std::uint64_t seed,
                   const IterationHook& hook, const InitState* warm_start) {
    Hyperparams local = hyper;
    local.seed = seed;
    const int K = hyper.num_regimes;

    InitState init = warm_start ? *warm_start : initialize(series, local);
    ModelParams params = std::move(init.params);
    LatentFactors lat = std::move(init.latents);
    Matrix imputed = std::move(init.imputed);

    FitReport report;
    report.warnings = std::move(init.warnings);

    std::mt19937_64 reseed_rng(local.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> unit_normal(0.0, 1.0);
    std::vector<int> empty_streak(static_cast<std::size_t>(K), 0);

    BestIterate best;
    bool converged = false;
    double prev_objective = std::numeric_limits<double>::quiet_NaN();
    int iter = 0;

    for (; iter < hyper.max_iter; ++iter) {
        const auto t_start = std::chrono::steady_clock::now();
        try {
            ViterbiResult vit = viterbi_decode(series, params, lat.U, imputed);
            SmoothedPosterior smoothed = rts_smooth(vit.path_cells, params);
            const std::vector<Eigen::Index> counts = regime_counts(vit.path, K);

            std::vector<ContextualPosterior> ctx(static_cast<std::size_t>(K));
            for (int k = 0; k < K; ++k)
                ctx[static_cast<std::size_t>(k)] = infer_contextual_factors(
                    lat.S[static_cast<std::size_t>(k)], lat.U[static_cast<std::size_t>(k)],
                    params.var_s[static_cast<std::size_t>(k)],
                    params.var_v[static_cast<std::size_t>(k)]);

            for (int k = 0; k < K; ++k) {
                if (counts[static_cast<std::size_t>(k)] == 0) {
                    report.warnings.push_back("fit: iteration " + std::to_string(iter) +
                                              ": regime " + std::to_string(k) +
                                              " empty; parameters retained");
                    continue;
                }
                lat.U[static_cast<std::size_t>(k)] = update_observation_matrix(
                    k, hyper.alpha, series, smoothed, vit.path, ctx[static_cast<std::size_t>(k)],
                    lat.S[static_cast<std::size_t>(k)], params.var_x[static_cast<std::size_t>(k)],
                    params.var_s[static_cast<std::size_t>(k)], lat.U[static_cast<std::size_t>(k)],
                    &report.warnings);
            }

            DynamicsUpdate dyn = m_step_dynamics(smoothed, vit.path, series, lat.U, ctx, lat.S,
                                                 params, &report.warnings);
            const ModelParams prev_params = params;
            params.B = std::move(dyn.B);
            params.z0 = std::move(dyn.z0);
            params.psi0 = std::move(dyn.psi0);
            params.var_z = dyn.var_z;
            params.var_x = std::move(dyn.var_x);
            params.var_s = std::move(dyn.var_s);
            params.var_v = std::move(dyn.var_v);
            for (int k = 0; k < K; ++k) {
                if (counts[static_cast<std::size_t>(k)] == 0) {
                    params.var_x[static_cast<std::size_t>(k)] = prev_params.var_x[static_cast<std::size_t>(k)];
                    params.var_s[static_cast<std::size_t>(k)] = prev_params.var_s[static_cast<std::size_t>(k)];
                    params.var_v[static_cast<std::size_t>(k)] = prev_params.var_v[static_cast<std::size_t>(k)];
                }
            }

            // deterministic annealing for K >= 2: over-confident observation
            // noise and networks in early iterations freeze the regime path
            // into per-step noise fitting; the decaying floors vanish after
            // ~10 iterations and leave the fixed points untouched
            double cov_ridge = 1e-3;
            if (K > 1) {
                const double floor_x = std::pow(0.5, iter);
                for (int k = 0; k < K; ++k)
                    params.var_x[static_cast<std::size_t>(k)] =
                        std::max(params.var_x[static_cast<std::size_t>(k)], floor_x);
                cov_ridge = std::max(cov_ridge, floor_x);
            }

            RegimeUpdate reg = m_step_regimes(vit.path, K);
            params.pi = std::move(reg.pi);
            params.markov = std::move(reg.markov);

            imputed = impute(series, vit.path, lat.U, smoothed.mean);
            params.networks = m_step_networks(imputed, vit.path, hyper.lambda, hyper.glasso,
                                              params.networks, &report.warnings, hyper.threads,
                                              cov_ridge);
            for (int k = 0; k < K; ++k)
                lat.S[static_cast<std::size_t>(k)] = partial_correlation_matrix(
                    params.networks[static_cast<std::size_t>(k)].precision);

            lat.Z = smoothed.mean;
            lat.F = vit.path;
            for (int k = 0; k < K; ++k)
                lat.V[static_cast<std::size_t>(k)] = ctx[static_cast<std::size_t>(k)].mean;

            const double objective =
                penalized_objective(series, params, lat, imputed, hyper.lambda);
            report.objective_trace.push_back(objective);

            if (hook) hook(IterationState{iter, params, lat, smoothed, imputed, objective});

            if (!best.valid || objective > best.objective) {
                best.valid = true;
                best.objective = objective;
                best.params = params;
                best.latents = lat;
                best.smoothed = std::move(smoothed);
                best.imputed = imputed;
            }

            // split heuristic for regimes that stay empty
            for (int k = 0; k < K; ++k) {
                auto& streak = empty_streak[static_cast<std::size_t>(k)];
                streak = counts[static_cast<std::size_t>(k)] == 0 ? streak + 1 : 0;
                if (streak >= kEmptyRegimeReseedAfter) {
                    int src = 0;
                    for (int j = 1; j < K; ++j)
                        if (counts[static_cast<std::size_t>(j)] > counts[static_cast<std::size_t>(src)])
                            src = j;
                    const double scale = 0.1 / std::sqrt(static_cast<double>(hyper.latent_dim));
                    Matrix u = lat.U[static_cast<std::size_t>(src)];
                    for (Eigen::Index col = 0; col < u.cols(); ++col)
                        for (Eigen::Index row = 0; row < u.rows(); ++row)
                            u(row, col) += scale * unit_normal(reseed_rng);
                    lat.U[static_cast<std::size_t>(k)] = std::move(u);
                    lat.S[static_cast<std::size_t>(k)] = lat.S[static_cast<std::size_t>(src)];
                    params.networks[static_cast<std::size_t>(k)] =
                        params.networks[static_cast<std::size_t>(src)];
                    params.var_x[static_cast<std::size_t>(k)] = params.var_x[static_cast<std::size_t>(src)];
                    params.var_s[static_cast<std::size_t>(k)] = params.var_s[static_cast<std::size_t>(src)];
                    params.var_v[static_cast<std::size_t>(k)] = params.var_v[static_cast<std::size_t>(src)];
                    streak = 0;
                    report.warnings.push_back("fit: iteration " + std::to_string(iter) +
                                              ": regime " + std::to_string(k) +
                                              " reseeded from regime " + std::to_string(src));
                }
            }
        } catch (const NumericError& err) {
            throw NumericError("fit: iteration " + std::to_string(iter) + ": " + err.what());
        }

        const auto t_end = std::chrono::steady_clock::now();
        report.iteration_seconds.push_back(
            std::chrono::duration<double>(t_end - t_start).count());

        const double objective = report.objective_trace.back();
        if (iter >= 1) {
            const double rel =
                std::abs(objective - prev_objective) / std::max(1.0, std::abs(prev_objective));
            if (rel < hyper.tol) {
                converged = true;
                ++iter;
                break;
            }
        }
        prev_objective = objective;
    }

    report.iterations = static_cast<int>(report.objective_trace.size());
    report.converged = converged;

    FitResult result;
    result.params = std::move(best.params);
    result.latents = std::move(best.latents);
    result.smoothed = std::move(best.smoothed);
    result.imputed = std::move(best.imputed);
    report.regime_counts = regime_counts(result.latents.F, K);
    result.report = std::move(report);
    return result;
}

}  // namespace

FitResult fit(const PartialSeries& series, const Hyperparams& hyper, const IterationHook& hook,
              const InitState* warm_start) {
    hyper.validate();
    if (warm_start) return fit_once(series, hyper, hyper.seed, hook, warm_start);
    FitResult best;
    double best_objective = -std::numeric_limits<double>::infinity();
    bool have = false;
    for (int r = 0; r < hyper.n_restarts; ++r) {
        FitResult candidate =
            fit_once(series, hyper, hyper.seed + static_cast<std::uint64_t>(r), hook, nullptr);
        double obj = -std::numeric_limits<double>::infinity();
        for (double v : candidate.report.objective_trace) obj = std::max(obj, v);
        if (!have || obj > best_objective) {
            have = true;
            best_objective = obj;
            best = std::move(candidate);
            if (hyper.n_restarts > 1)
                best.report.warnings.push_back("fit: restart " + std::to_string(r) + " selected");
        }
    }
    return best;
}

RegimeSweepResult select_num_regimes(const PartialSeries& series, const Hyperparams& base,
                                     const std::vector<int>& candidates, double holdout_rate) {
    if (candidates.empty()) throw std::invalid_argument("select_num_regimes: no candidates");
    TuningSplit split = add_tuning_mask(series, holdout_rate, 0.05, base.seed ^ 0xa5a5a5a5ULL);

    RegimeSweepResult result;
    double best_rmse = std::numeric_limits<double>::infinity();
    for (int k : candidates) {
        Hyperparams h = base;
        h.num_regimes = k;
        FitResult fitres = fit(split.series, h);
        const double score = rmse(series.values(), fitres.imputed, split.eval_mask);
        result.entries.push_back({k, score, fitres.report.converged});
        if (score < best_rmse) {
            best_rmse = score;
            result.best_num_regimes = k;
        }
    }
    return result;
}

}  // namespace missnet
