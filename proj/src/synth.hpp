#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "types.hpp"

namespace missnet {

// RNG engine identifier stamped into dataset metadata; bit-reproducibility is
// promised within this implementation only.
inline constexpr const char* kRngId = "std-mt19937_64";

struct SynthSpec {
    Eigen::Index num_steps = 1000;
    Eigen::Index num_features = 50;
    int latent_dim = 10;
    int num_regimes = 1;
    Eigen::Index switch_period = 200;
    std::uint64_t seed = 0;
};

enum class Pattern { A, B };

struct SynthDataset {
    Matrix clean;                      // N x T
    Matrix latent;                     // L x T
    std::vector<Matrix> obs_matrices;  // K of N x L
    RegimePath true_path;
};

struct LatentOptions {
    bool include_trend = true;
    bool include_noise = true;
    bool noise_is_std = false;  // false: N(0, 0.3) with 0.3 as variance
};

// Per-row sinusoid + linear trend + Gaussian noise:
//   z_{i,t} = sin(2*pi*beta*t/T) + gamma*t + eta_t,  t = 1..T,
// beta ~ U(1,20), |gamma| ~ U(0.3,1) with uniform sign.
Matrix generate_latent(const SynthSpec& spec, const LatentOptions& opts = {});
Matrix generate_latent(const SynthSpec& spec, std::mt19937_64& rng, const LatentOptions& opts = {});

// Random bipartite graph weights: each entry selected with probability
// edge_prob, selected weights uniform on [-0.6,-0.3] U [0.3,0.6].
Matrix generate_observation_matrix(Eigen::Index n, Eigen::Index l, std::uint64_t seed,
                                   double edge_prob = 0.2);
Matrix generate_observation_matrix(Eigen::Index n, Eigen::Index l, std::mt19937_64& rng,
                                   double edge_prob = 0.2);

// Pattern A: one regime, constant path. Pattern B: two regimes alternating
// every switch_period steps, sharing one latent trajectory.
SynthDataset generate_dataset(const SynthSpec& spec, Pattern pattern,
                              const LatentOptions& opts = {});

// Random per-feature missing blocks (length uniform in [1, max_block_frac*T],
// overlaps allowed) until the missing fraction reaches target_rate.
PartialSeries inject_missing(const Matrix& clean, double target_rate,
                             double max_block_frac = 0.05, std::uint64_t seed = 0);

struct ZScoreStats {
    Vector mean;  // per feature, observed entries only
    Vector stdev;
    std::vector<std::string> warnings;

    Matrix invert(const Matrix& normalized) const;
    Vector invert_feature(Eigen::Index i, const Vector& normalized) const;
};

struct ZScoreResult {
    PartialSeries series;
    ZScoreStats stats;
};

// Per-feature standardization over observed entries; std floored at 1e-8.
ZScoreResult zscore(const PartialSeries& series);

struct TuningSplit {
    PartialSeries series;   // input plus the extra held-out missing cells
    MaskMatrix eval_mask;   // 1 where a previously observed cell was hidden
};

// Hides an extra fraction of cells (blocks, placed on observed cells only)
// for hyperparameter tuning.
TuningSplit add_tuning_mask(const PartialSeries& series, double extra_rate = 0.10,
                            double max_block_frac = 0.05, std::uint64_t seed = 0);

}  // namespace missnet
