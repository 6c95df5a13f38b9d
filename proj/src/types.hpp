#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace missnet {

// Partially observed multivariate series: values (N features x T steps) plus a
// binary mask (1 = observed). Masked-out entries are stored as 0.0 and are
// never read by any fitting code.
class PartialSeries {
public:
    PartialSeries(Matrix values, MaskMatrix mask);

    Eigen::Index num_features() const { return values_.rows(); }
    Eigen::Index num_steps() const { return values_.cols(); }

    const Matrix& values() const { return values_; }
    const MaskMatrix& mask() const { return mask_; }

    bool observed(Eigen::Index i, Eigen::Index t) const { return mask_(i, t) != 0; }
    double missing_fraction() const;

private:
    Matrix values_;
    MaskMatrix mask_;
};

struct ObservedSlice {
    std::vector<Eigen::Index> indices;  // ascending feature indices with mask=1
    Vector values;                      // matching observed values
    bool empty() const { return indices.empty(); }
    Eigen::Index size() const { return static_cast<Eigen::Index>(indices.size()); }
};

ObservedSlice observed_slice(const PartialSeries& series, Eigen::Index t);

// Rows of full (N x L) picked out by the slice: the observed-only observation matrix.
Matrix select_rows(const Matrix& full, const ObservedSlice& slice);

struct GlassoConfig {
    double rho = 1.0;
    double abs_tol = 1e-5;
    double rel_tol = 1e-4;
    int max_admm_iter = 500;

    void validate() const;
};

struct Hyperparams {
    int latent_dim = 10;
    int num_regimes = 1;
    double alpha = 0.5;
    double lambda = 1.0;
    int max_iter = 50;
    double tol = 1e-4;
    std::uint64_t seed = 0;

    int n_restarts = 1;
    int threads = 0;  // 0 = auto
    GlassoConfig glasso;

    void validate() const;
};

// Sparse precision matrix (network) with its regime mean.
struct Network {
    Matrix precision;  // N x N, symmetric positive definite
    Vector mean;       // N
};

using RegimePath = std::vector<int>;

struct ModelParams {
    Matrix B;      // L x L transition
    Vector z0;     // L initial latent state
    Matrix psi0;   // L x L initial covariance
    double var_z = 1.0;          // sigma_Z^2
    std::vector<double> var_x;   // K, sigma_X^(k)^2
    std::vector<double> var_s;   // K
    std::vector<double> var_v;   // K
    std::vector<Network> networks;  // K
    Vector pi;     // K, initial regime distribution
    Matrix markov;  // K x K, markov(k,l) = P(next = k | prev = l); columns sum to 1

    int num_regimes() const { return static_cast<int>(pi.size()); }
    int latent_dim() const { return static_cast<int>(z0.size()); }
    void validate(Eigen::Index num_features) const;
};

struct LatentFactors {
    Matrix Z;                // L x T smoothed latent states
    std::vector<Matrix> V;   // K of L x N contextual latent factors
    std::vector<Matrix> U;   // K of N x L observation matrices
    std::vector<Matrix> S;   // K of N x N contextual matrices (unit diagonal, entries in [-1,1])
    RegimePath F;            // length T, entries in [0, K)
};

struct SmoothedPosterior {
    Matrix mean;                 // L x T
    std::vector<Matrix> cov;     // T of L x L
    std::vector<Matrix> cross;   // T of L x L, E[z_t z'_{t-1}]; cross[0] unused
    std::vector<Matrix> second;  // T of L x L, E[z_t z'_t]

    Eigen::Index num_steps() const { return mean.cols(); }
};

void validate_regime_path(const RegimePath& path, int num_regimes, Eigen::Index num_steps);

}  // namespace missnet
