#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace missnet {

Matrix generate_latent(const SynthSpec& spec, std::mt19937_64& rng, const LatentOptions& opts) {
    const Eigen::Index T = spec.num_steps;
    const Eigen::Index L = spec.latent_dim;
    if (T < 1 || L < 1) throw std::invalid_argument("generate_latent: invalid spec");

    std::uniform_real_distribution<double> beta_dist(1.0, 20.0);
    std::uniform_real_distribution<double> gamma_dist(0.3, 1.0);
    std::bernoulli_distribution coin(0.5);
    const double noise_sigma = opts.noise_is_std ? 0.3 : std::sqrt(0.3);
    std::normal_distribution<double> noise(0.0, noise_sigma);

    Matrix z(L, T);
    for (Eigen::Index i = 0; i < L; ++i) {
        const double beta = beta_dist(rng);
        double gamma = gamma_dist(rng);
        if (coin(rng)) gamma = -gamma;
        for (Eigen::Index t = 0; t < T; ++t) {
            const double time = static_cast<double>(t + 1);
            const double eta = noise(rng);
            double v = std::sin(2.0 * std::numbers::pi * beta * time / static_cast<double>(T));
            // trend over normalized time, so it stays commensurate with the
            // unit-amplitude seasonal part at any T
            if (opts.include_trend) v += gamma * time / static_cast<double>(T);
            if (opts.include_noise) v += eta;
            z(i, t) = v;
        }
    }
    return z;
}

Matrix generate_latent(const SynthSpec& spec, const LatentOptions& opts) {
    std::mt19937_64 rng(spec.seed);
    return generate_latent(spec, rng, opts);
}

Matrix generate_observation_matrix(Eigen::Index n, Eigen::Index l, std::mt19937_64& rng,
                                   double edge_prob) {
    if (n < 1 || l < 1) throw std::invalid_argument("generate_observation_matrix: invalid dims");
    if (edge_prob < 0.0 || edge_prob > 1.0)
        throw std::invalid_argument("generate_observation_matrix: edge_prob in [0,1]");
    std::bernoulli_distribution selected(edge_prob);
    std::uniform_real_distribution<double> magnitude(0.3, 0.6);
    std::bernoulli_distribution coin(0.5);
    Matrix u = Matrix::Zero(n, l);
    for (Eigen::Index j = 0; j < l; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!selected(rng)) continue;
            const double w = magnitude(rng);
            u(i, j) = coin(rng) ? w : -w;
        }
    }
    return u;
}

Matrix generate_observation_matrix(Eigen::Index n, Eigen::Index l, std::uint64_t seed,
                                   double edge_prob) {
    std::mt19937_64 rng(seed);
    return generate_observation_matrix(n, l, rng, edge_prob);
}

SynthDataset generate_dataset(const SynthSpec& spec, Pattern pattern, const LatentOptions& opts) {
    if (pattern == Pattern::A && spec.num_regimes != 1)
        throw std::invalid_argument("generate_dataset: pattern A requires one regime");
    if (pattern == Pattern::B && spec.num_regimes != 2)
        throw std::invalid_argument("generate_dataset: pattern B requires two regimes");
    if (pattern == Pattern::B && spec.switch_period < 1)
        throw std::invalid_argument("generate_dataset: switch_period must be >= 1");

    std::mt19937_64 rng(spec.seed);
    SynthDataset ds;
    ds.latent = generate_latent(spec, rng, opts);
    ds.obs_matrices.reserve(static_cast<std::size_t>(spec.num_regimes));
    for (int k = 0; k < spec.num_regimes; ++k)
        ds.obs_matrices.push_back(
            generate_observation_matrix(spec.num_features, spec.latent_dim, rng));

    ds.true_path.resize(static_cast<std::size_t>(spec.num_steps));
    for (Eigen::Index t = 0; t < spec.num_steps; ++t) {
        const int k = pattern == Pattern::A
                          ? 0
                          : static_cast<int>((t / spec.switch_period) % spec.num_regimes);
        ds.true_path[static_cast<std::size_t>(t)] = k;
    }

    ds.clean.resize(spec.num_features, spec.num_steps);
    for (Eigen::Index t = 0; t < spec.num_steps; ++t)
        ds.clean.col(t) =
            ds.obs_matrices[static_cast<std::size_t>(ds.true_path[static_cast<std::size_t>(t)])] *
            ds.latent.col(t);
    return ds;
}

PartialSeries inject_missing(const Matrix& clean, double target_rate, double max_block_frac,
                             std::uint64_t seed) {
    if (target_rate <= 0.0 || target_rate >= 1.0)
        throw std::invalid_argument("inject_missing: target_rate must be in (0,1)");
    const Eigen::Index n = clean.rows();
    const Eigen::Index t_len = clean.cols();
    const Eigen::Index max_len =
        std::max<Eigen::Index>(1, static_cast<Eigen::Index>(max_block_frac * static_cast<double>(t_len)));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> feature(0, n - 1);
    std::uniform_int_distribution<Eigen::Index> start(0, t_len - 1);
    std::uniform_int_distribution<Eigen::Index> length(1, max_len);

    MaskMatrix mask = MaskMatrix::Constant(n, t_len, 1);
    const double total = static_cast<double>(n * t_len);
    Eigen::Index missing = 0;
    while (static_cast<double>(missing) / total < target_rate) {
        const Eigen::Index i = feature(rng);
        const Eigen::Index t0 = start(rng);
        const Eigen::Index end = std::min(t0 + length(rng), t_len);
        for (Eigen::Index t = t0; t < end; ++t) {
            if (mask(i, t)) {
                mask(i, t) = 0;
                ++missing;
            }
        }
    }
    return PartialSeries(clean, std::move(mask));
}

ZScoreResult zscore(const PartialSeries& series) {
    const Eigen::Index n = series.num_features();
    const Eigen::Index t_len = series.num_steps();
    ZScoreStats stats;
    stats.mean = Vector::Zero(n);
    stats.stdev = Vector::Ones(n);

    Matrix values = series.values();
    for (Eigen::Index i = 0; i < n; ++i) {
        double sum = 0.0;
        Eigen::Index count = 0;
        for (Eigen::Index t = 0; t < t_len; ++t) {
            if (!series.observed(i, t)) continue;
            sum += values(i, t);
            ++count;
        }
        if (count == 0) {
            stats.warnings.push_back("zscore: feature " + std::to_string(i) +
                                     " has no observed values; left unscaled");
            continue;
        }
        const double mean = sum / static_cast<double>(count);
        double ss = 0.0;
        for (Eigen::Index t = 0; t < t_len; ++t) {
            if (!series.observed(i, t)) continue;
            const double d = values(i, t) - mean;
            ss += d * d;
        }
        double sd = std::sqrt(ss / static_cast<double>(count));
        if (sd < 1e-8) {
            sd = 1e-8;
            stats.warnings.push_back("zscore: feature " + std::to_string(i) +
                                     " is constant; std floored");
        }
        stats.mean(i) = mean;
        stats.stdev(i) = sd;
        for (Eigen::Index t = 0; t < t_len; ++t)
            if (series.observed(i, t)) values(i, t) = (values(i, t) - mean) / sd;
    }
    return {PartialSeries(std::move(values), series.mask()), std::move(stats)};
}

Matrix ZScoreStats::invert(const Matrix& normalized) const {
    Matrix out = normalized;
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        out.row(i) = normalized.row(i) * stdev(i) + Eigen::RowVectorXd::Constant(out.cols(), mean(i));
    return out;
}

Vector ZScoreStats::invert_feature(Eigen::Index i, const Vector& normalized) const {
    return (normalized.array() * stdev(i) + mean(i)).matrix();
}

TuningSplit add_tuning_mask(const PartialSeries& series, double extra_rate, double max_block_frac,
                            std::uint64_t seed) {
    if (extra_rate <= 0.0 || extra_rate >= 1.0)
        throw std::invalid_argument("add_tuning_mask: extra_rate must be in (0,1)");
    const Eigen::Index n = series.num_features();
    const Eigen::Index t_len = series.num_steps();
    const Eigen::Index max_len =
        std::max<Eigen::Index>(1, static_cast<Eigen::Index>(max_block_frac * static_cast<double>(t_len)));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> feature(0, n - 1);
    std::uniform_int_distribution<Eigen::Index> start(0, t_len - 1);
    std::uniform_int_distribution<Eigen::Index> length(1, max_len);

    MaskMatrix mask = series.mask();
    MaskMatrix eval_mask = MaskMatrix::Zero(n, t_len);
    const double total = static_cast<double>(n * t_len);
    Eigen::Index observed = 0;
    for (Eigen::Index t = 0; t < t_len; ++t)
        for (Eigen::Index i = 0; i < n; ++i) observed += mask(i, t) ? 1 : 0;

    Eigen::Index target = static_cast<Eigen::Index>(std::ceil(extra_rate * total));
    target = std::min(target, observed);
    Eigen::Index hidden = 0;
    std::uint64_t attempts = 0;
    const std::uint64_t max_attempts = 64ULL * static_cast<std::uint64_t>(n * t_len) + 1024ULL;
    while (hidden < target && attempts < max_attempts) {
        ++attempts;
        const Eigen::Index i = feature(rng);
        const Eigen::Index t0 = start(rng);
        const Eigen::Index end = std::min(t0 + length(rng), t_len);
        for (Eigen::Index t = t0; t < end && hidden < target; ++t) {
            if (mask(i, t)) {
                mask(i, t) = 0;
                eval_mask(i, t) = 1;
                ++hidden;
            }
        }
    }
    return {PartialSeries(series.values(), std::move(mask)), std::move(eval_mask)};
}

}  // namespace missnet
