#pragma once

#include <string>
#include <vector>

#include "linalg.hpp"
#include "types.hpp"

namespace missnet {

// Posterior of the contextual latent factors of one regime. The covariance is
// shared across columns; per-column second moments are Gamma + nu_j nu_j'.
struct ContextualPosterior {
    Matrix mean;  // L x N, column j = nu_j = E[v_j]
    Matrix cov;   // L x L, Gamma

    Matrix second_moment(Eigen::Index j) const {
        return cov + mean.col(j) * mean.col(j).transpose();
    }
    // sum_j E[v_j v_j'] = N * Gamma + mean * mean'
    Matrix second_moment_sum() const {
        return static_cast<double>(mean.cols()) * cov + mean * mean.transpose();
    }
};

// Bayes update of v_j given s_j = U v_j + noise and the spherical prior:
//   M = U'U + (var_s/var_v) I,  Gamma = var_s M^{-1},  nu_j = M^{-1} U' s_j.
ContextualPosterior infer_contextual_factors(const Matrix& S_k, const Matrix& U_k, double var_s,
                                             double var_v);

// Row-wise observation-matrix update blending the contextual fit (weight
// alpha) with the data fit over the regime's observed entries (weight
// 1 - alpha):  U_i = A1 * A2^{-1}. A singular A2 is jittered once; if it still
// fails the previous row is kept and a warning recorded.
Matrix update_observation_matrix(int k, double alpha, const PartialSeries& series,
                                 const SmoothedPosterior& smoothed, const RegimePath& path,
                                 const ContextualPosterior& ctx, const Matrix& S_k,
                                 double var_x, double var_s, const Matrix& U_prev,
                                 std::vector<std::string>* warnings = nullptr);

// S_ii = 1, S_ij = -P_ij / sqrt(P_ii P_jj); entries clamped to [-1, 1].
Matrix partial_correlation_matrix(const Matrix& precision);

}  // namespace missnet
