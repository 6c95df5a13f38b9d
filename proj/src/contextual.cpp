#include "contextual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "errors.hpp"

namespace missnet {

ContextualPosterior infer_contextual_factors(const Matrix& S_k, const Matrix& U_k, double var_s,
                                             double var_v) {
    if (var_s <= 0 || var_v <= 0)
        throw std::invalid_argument("infer_contextual_factors: variances must be > 0");
    if (S_k.rows() != U_k.rows() || S_k.rows() != S_k.cols())
        throw std::invalid_argument("infer_contextual_factors: shape mismatch");
    const Eigen::Index L = U_k.cols();
    Matrix m = U_k.transpose() * U_k;
    m.diagonal().array() += var_s / var_v;
    SpdFactor factor(m, "infer_contextual_factors: M");
    ContextualPosterior post;
    post.mean = factor.solve(U_k.transpose() * S_k);  // L x N
    post.cov = symmetrized(var_s * factor.inverse());
    (void)L;
    return post;
}

Matrix update_observation_matrix(int k, double alpha, const PartialSeries& series,
                                 const SmoothedPosterior& smoothed, const RegimePath& path,
                                 const ContextualPosterior& ctx, const Matrix& S_k,
                                 double var_x, double var_s, const Matrix& U_prev,
                                 std::vector<std::string>* warnings) {
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("update_observation_matrix: alpha must be in [0,1]");
    const Eigen::Index N = series.num_features();
    const Eigen::Index T = series.num_steps();
    const Eigen::Index L = U_prev.cols();
    if (static_cast<Eigen::Index>(path.size()) != T)
        throw std::invalid_argument("update_observation_matrix: path length mismatch");

    const double w_ctx = alpha / var_s;
    const double w_data = (1.0 - alpha) / var_x;

    // Contextual terms are row-dependent only through S_k's row.
    Matrix ctx_a1 = Matrix::Zero(N, L);
    Matrix ctx_a2 = Matrix::Zero(L, L);
    if (alpha > 0.0) {
        ctx_a1 = w_ctx * (S_k * ctx.mean.transpose());  // row i: sum_j S_ij E[v_j']
        ctx_a2 = w_ctx * ctx.second_moment_sum();
    }

    // Data terms accumulate over the regime's timesteps, gated by the mask.
    Matrix data_a1 = Matrix::Zero(N, L);
    std::vector<Matrix> data_a2(static_cast<std::size_t>(N), Matrix::Zero(L, L));
    if (alpha < 1.0) {
        for (Eigen::Index t = 0; t < T; ++t) {
            if (path[static_cast<std::size_t>(t)] != k) continue;
            const Matrix& second = smoothed.second[static_cast<std::size_t>(t)];
            const auto mean_t = smoothed.mean.col(t);
            for (Eigen::Index i = 0; i < N; ++i) {
                if (!series.observed(i, t)) continue;
                data_a1.row(i) += series.values()(i, t) * mean_t.transpose();
                data_a2[static_cast<std::size_t>(i)] += second;
            }
        }
    }

    Matrix updated(N, L);
    for (Eigen::Index i = 0; i < N; ++i) {
        Matrix a2 = ctx_a2 + w_data * data_a2[static_cast<std::size_t>(i)];
        Vector a1 = (ctx_a1.row(i) + w_data * data_a1.row(i)).transpose();
        symmetrize(a2);
        Eigen::LLT<Matrix> llt(a2);
        if (llt.info() != Eigen::Success) {
            const double trace = a2.trace();
            a2.diagonal().array() += 1e-9 * (trace > 0 ? trace / static_cast<double>(L) : 1.0);
            llt.compute(a2);
        }
        if (llt.info() != Eigen::Success) {
            if (warnings)
                warnings->push_back("update_observation_matrix: regime " + std::to_string(k) +
                                    " row " + std::to_string(i) + " kept (singular A2)");
            updated.row(i) = U_prev.row(i);
            continue;
        }
        updated.row(i) = llt.solve(a1).transpose();  // U_i = A1 A2^{-1}, A2 symmetric
    }
    return updated;
}

Matrix partial_correlation_matrix(const Matrix& precision) {
    const Eigen::Index n = precision.rows();
    if (precision.cols() != n)
        throw std::invalid_argument("partial_correlation_matrix: matrix must be square");
    for (Eigen::Index i = 0; i < n; ++i)
        if (precision(i, i) <= 0.0)
            throw NumericError("partial_correlation_matrix: non-positive diagonal entry");
    Matrix s = Matrix::Identity(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == j) continue;
            const double denom = std::sqrt(precision(i, i)) * std::sqrt(precision(j, j));
            const double raw = -0.5 * (precision(i, j) + precision(j, i)) / denom;
            s(i, j) = std::clamp(raw, -1.0, 1.0);
        }
    }
    return s;
}

}  // namespace missnet
