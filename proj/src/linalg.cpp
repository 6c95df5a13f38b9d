#include "linalg.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace missnet {

void symmetrize(Matrix& m) {
    m = 0.5 * (m + m.transpose()).eval();
}

Matrix symmetrized(Matrix m) {
    symmetrize(m);
    return m;
}

bool all_finite(const Matrix& m) {
    return m.allFinite();
}

bool all_finite(const Vector& v) {
    return v.allFinite();
}

double min_eigenvalue(const Matrix& symmetric) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(symmetric), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double off_diagonal_l1(const Matrix& m) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (i != j) sum += std::abs(m(i, j));
    return sum;
}

SpdFactor::SpdFactor(const Matrix& m, const char* context) {
    const Eigen::Index n = m.rows();
    Matrix sym = symmetrized(m);
    llt_.compute(sym);
    if (llt_.info() != Eigen::Success) {
        double trace = sym.trace();
        jitter_ = 1e-9 * (trace > 0.0 ? trace / static_cast<double>(n) : 1.0);
        sym.diagonal().array() += jitter_;
        llt_.compute(sym);
        if (llt_.info() != Eigen::Success) {
            throw NumericError(std::string(context) + ": Cholesky failed after jitter");
        }
    }
    log_det_ = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
    if (!std::isfinite(log_det_)) {
        throw NumericError(std::string(context) + ": non-finite log-determinant");
    }
}

Matrix SpdFactor::inverse() const {
    const Eigen::Index n = llt_.matrixLLT().rows();
    return llt_.solve(Matrix::Identity(n, n));
}

double SpdFactor::quadratic_inv(const Vector& x) const {
    return x.dot(llt_.solve(x));
}

}  // namespace missnet
