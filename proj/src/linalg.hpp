#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace missnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using MaskMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// In-place (M + M')/2.
void symmetrize(Matrix& m);
Matrix symmetrized(Matrix m);

bool all_finite(const Matrix& m);
bool all_finite(const Vector& v);

double min_eigenvalue(const Matrix& symmetric);

// Sum of |m(i,j)| over i != j.
double off_diagonal_l1(const Matrix& m);

// Cholesky factorization with one trace-scaled jitter retry (eps = 1e-9 * trace/n).
// Throws NumericError if the jittered matrix still fails to factor.
class SpdFactor {
public:
    explicit SpdFactor(const Matrix& m, const char* context = "matrix");

    // log det of the (possibly jittered) matrix
    double log_det() const { return log_det_; }
    double jitter() const { return jitter_; }

    template <typename Derived>
    auto solve(const Eigen::MatrixBase<Derived>& rhs) const {
        return llt_.solve(rhs.derived()).eval();
    }
    Matrix inverse() const;

    // x' M^{-1} x
    double quadratic_inv(const Vector& x) const;

private:
    Eigen::LLT<Matrix> llt_;
    double log_det_ = 0.0;
    double jitter_ = 0.0;
};

}  // namespace missnet
