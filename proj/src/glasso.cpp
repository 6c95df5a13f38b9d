#include "glasso.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "errors.hpp"

namespace missnet {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)

Matrix soft_threshold_offdiag(const Matrix& m, double kappa) {
    Matrix out = m;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i == j) continue;
            const double v = m(i, j);
            out(i, j) = std::copysign(std::max(std::abs(v) - kappa, 0.0), v);
        }
    }
    return out;
}

Matrix regularized_inverse(const Matrix& cov) {
    const Eigen::Index n = cov.rows();
    const double trace = cov.trace();
    const double eps = std::max(1e-6 * trace / static_cast<double>(n), 1e-6);
    Matrix shifted = symmetrized(cov);
    shifted.diagonal().array() += eps;
    SpdFactor factor(shifted, "graphical_lasso: regularized inverse");
    return symmetrized(factor.inverse());
}

}  // namespace

std::pair<Vector, Matrix> empirical_moments(const Matrix& samples) {
    const Eigen::Index m = samples.cols();
    if (m < 1) throw std::invalid_argument("empty regime");
    Vector mean = samples.rowwise().mean();
    Matrix centered = samples.colwise() - mean;
    Matrix cov = (centered * centered.transpose()) / static_cast<double>(m);
    symmetrize(cov);
    return {std::move(mean), std::move(cov)};
}

GlassoResult graphical_lasso(const Matrix& cov, double lambda, const GlassoConfig& cfg,
                             const std::optional<Matrix>& warm_start) {
    const Eigen::Index n = cov.rows();
    if (n == 0) throw std::invalid_argument("graphical_lasso: empty covariance");
    if (cov.cols() != n) throw std::invalid_argument("graphical_lasso: covariance must be square");
    if (!all_finite(cov)) throw std::invalid_argument("graphical_lasso: non-finite covariance");
    if (lambda < 0) throw std::invalid_argument("graphical_lasso: lambda must be >= 0");
    cfg.validate();

    if (lambda == 0.0 || cov.diagonal().minCoeff() <= 0.0) {
        return {regularized_inverse(cov), 0, true};
    }

    const Matrix s = symmetrized(cov);
    double rho = cfg.rho;

    Matrix z = warm_start ? symmetrized(*warm_start) : Matrix(Matrix::Identity(n, n));
    Matrix u = Matrix::Zero(n, n);
    Matrix x = z;

    const double dim = static_cast<double>(n);
    int iter = 0;
    bool converged = false;
    Eigen::SelfAdjointEigenSolver<Matrix> es;
    for (; iter < cfg.max_admm_iter; ++iter) {
        // x-update: minimize -logdet(x) + tr(s x) + rho/2 ||x - z + u||^2
        es.compute(symmetrized(rho * (z - u) - s));
        const Vector& w = es.eigenvalues();
        Vector xw(n);
        for (Eigen::Index i = 0; i < n; ++i)
            xw(i) = (w(i) + std::sqrt(w(i) * w(i) + 4.0 * rho)) / (2.0 * rho);
        x = es.eigenvectors() * xw.asDiagonal() * es.eigenvectors().transpose();
        symmetrize(x);

        // z-update: off-diagonal soft threshold
        Matrix z_prev = std::move(z);
        z = soft_threshold_offdiag(x + u, lambda / rho);

        u += x - z;

        const double r_norm = (x - z).norm();
        const double s_norm = (rho * (z - z_prev)).norm();
        const double eps_pri =
            dim * cfg.abs_tol + cfg.rel_tol * std::max(x.norm(), z.norm());
        const double eps_dual = dim * cfg.abs_tol + cfg.rel_tol * (rho * u).norm();
        if (r_norm <= eps_pri && s_norm <= eps_dual) {
            converged = true;
            ++iter;
            break;
        }

        // residual balancing keeps badly conditioned covariances tractable
        if (r_norm > 10.0 * s_norm) {
            rho *= 2.0;
            u *= 0.5;
        } else if (s_norm > 10.0 * r_norm) {
            rho *= 0.5;
            u *= 2.0;
        }
    }

    symmetrize(z);
    return {std::move(z), iter, converged};
}

GaussianLogLik::GaussianLogLik(Vector mean, const Matrix& precision) : mean_(std::move(mean)) {
    if (precision.rows() != precision.cols() || precision.rows() != mean_.size())
        throw std::invalid_argument("gaussian_ll: shape mismatch");
    precision_ = symmetrized(precision);
    Eigen::LLT<Matrix> llt(precision_);
    if (llt.info() != Eigen::Success)
        throw NumericError("gaussian_ll: precision matrix is not positive definite");
    log_det_ = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    if (!std::isfinite(log_det_))
        throw NumericError("gaussian_ll: non-finite log-determinant");
}

double GaussianLogLik::quadratic(const Vector& x) const {
    Vector d = x - mean_;
    return d.dot(precision_ * d);
}

double GaussianLogLik::operator()(const Vector& x) const {
    const double n = static_cast<double>(mean_.size());
    return -0.5 * quadratic(x) + 0.5 * log_det_ - 0.5 * n * kLog2Pi;
}

double gaussian_ll(const Vector& x, const Vector& mean, const Matrix& precision) {
    return GaussianLogLik(mean, precision)(x);
}

}  // namespace missnet
