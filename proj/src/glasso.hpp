#pragma once

#include <optional>
#include <utility>

#include "linalg.hpp"
#include "types.hpp"

namespace missnet {

struct GlassoResult {
    Matrix precision;
    int iterations = 0;
    bool converged = true;
};

// Arithmetic mean and biased (1/M) covariance of the columns of samples (N x M).
// Throws std::invalid_argument("empty regime") when M = 0.
std::pair<Vector, Matrix> empirical_moments(const Matrix& samples);

// Sparse inverse covariance: ADMM stationary point of
//     -log det(P) + tr(cov * P) + lambda * ||P||_od,1
// over symmetric positive definite P, with the l1 penalty applied to
// off-diagonal entries only.
//
// lambda = 0 (or a covariance with a non-positive diagonal entry, where the
// penalized objective is unbounded) skips ADMM and returns the regularized
// inverse (cov + eps*I)^{-1}, eps = max(1e-6 * trace/N, 1e-6).
GlassoResult graphical_lasso(const Matrix& cov, double lambda, const GlassoConfig& cfg,
                             const std::optional<Matrix>& warm_start = std::nullopt);

// Gaussian log-density of x under N(mean, precision^{-1}):
//   -1/2 (x-m)' P (x-m) + 1/2 log det P - N/2 log(2 pi)
// Throws NumericError when precision is not positive definite.
double gaussian_ll(const Vector& x, const Vector& mean, const Matrix& precision);

// Prefactored form for evaluating many points against one network.
class GaussianLogLik {
public:
    GaussianLogLik(Vector mean, const Matrix& precision);
    double operator()(const Vector& x) const;
    double log_det() const { return log_det_; }
    double quadratic(const Vector& x) const;  // (x-m)' P (x-m)

private:
    Vector mean_;
    Matrix precision_;
    double log_det_ = 0.0;
};

}  // namespace missnet
