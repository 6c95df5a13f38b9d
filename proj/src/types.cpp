#include "types.hpp"

#include <stdexcept>

#include "errors.hpp"

namespace missnet {

PartialSeries::PartialSeries(Matrix values, MaskMatrix mask)
    : values_(std::move(values)), mask_(std::move(mask)) {
    if (values_.rows() != mask_.rows() || values_.cols() != mask_.cols())
        throw std::invalid_argument("PartialSeries: values and mask shapes differ");
    if (values_.rows() < 1) throw std::invalid_argument("PartialSeries: need at least one feature");
    if (values_.cols() < 2) throw std::invalid_argument("PartialSeries: need at least two timesteps");
    for (Eigen::Index t = 0; t < values_.cols(); ++t) {
        for (Eigen::Index i = 0; i < values_.rows(); ++i) {
            if (mask_(i, t) == 0) {
                values_(i, t) = 0.0;
            } else if (!std::isfinite(values_(i, t))) {
                throw std::invalid_argument("PartialSeries: non-finite observed value");
            }
        }
    }
}

double PartialSeries::missing_fraction() const {
    const double total = static_cast<double>(mask_.rows() * mask_.cols());
    double missing = 0.0;
    for (Eigen::Index t = 0; t < mask_.cols(); ++t)
        for (Eigen::Index i = 0; i < mask_.rows(); ++i)
            if (mask_(i, t) == 0) missing += 1.0;
    return missing / total;
}

ObservedSlice observed_slice(const PartialSeries& series, Eigen::Index t) {
    if (t < 0 || t >= series.num_steps())
        throw std::invalid_argument("observed_slice: timestep out of range");
    ObservedSlice slice;
    const Eigen::Index n = series.num_features();
    slice.indices.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        if (series.observed(i, t)) slice.indices.push_back(i);
    slice.values.resize(static_cast<Eigen::Index>(slice.indices.size()));
    for (std::size_t r = 0; r < slice.indices.size(); ++r)
        slice.values(static_cast<Eigen::Index>(r)) = series.values()(slice.indices[r], t);
    return slice;
}

Matrix select_rows(const Matrix& full, const ObservedSlice& slice) {
    Matrix out(slice.size(), full.cols());
    for (Eigen::Index r = 0; r < slice.size(); ++r)
        out.row(r) = full.row(slice.indices[static_cast<std::size_t>(r)]);
    return out;
}

void GlassoConfig::validate() const {
    if (rho <= 0 || abs_tol <= 0 || rel_tol <= 0 || max_admm_iter <= 0)
        throw std::invalid_argument("GlassoConfig: all fields must be positive");
}

void Hyperparams::validate() const {
    if (latent_dim < 1) throw std::invalid_argument("Hyperparams: latent_dim must be >= 1");
    if (num_regimes < 1) throw std::invalid_argument("Hyperparams: num_regimes must be >= 1");
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("Hyperparams: alpha must be in [0,1]");
    if (lambda < 0.0) throw std::invalid_argument("Hyperparams: lambda must be >= 0");
    if (max_iter < 1) throw std::invalid_argument("Hyperparams: max_iter must be >= 1");
    if (tol <= 0.0) throw std::invalid_argument("Hyperparams: tol must be > 0");
    if (n_restarts < 1) throw std::invalid_argument("Hyperparams: n_restarts must be >= 1");
    if (threads < 0) throw std::invalid_argument("Hyperparams: threads must be >= 0");
    glasso.validate();
}

void ModelParams::validate(Eigen::Index num_features) const {
    const int k = num_regimes();
    const int l = latent_dim();
    if (k < 1) throw std::invalid_argument("ModelParams: need at least one regime");
    if (l < 1) throw std::invalid_argument("ModelParams: need latent_dim >= 1");
    if (B.rows() != l || B.cols() != l) throw std::invalid_argument("ModelParams: B shape");
    if (psi0.rows() != l || psi0.cols() != l) throw std::invalid_argument("ModelParams: psi0 shape");
    if (markov.rows() != k || markov.cols() != k) throw std::invalid_argument("ModelParams: markov shape");
    if (static_cast<int>(var_x.size()) != k || static_cast<int>(var_s.size()) != k ||
        static_cast<int>(var_v.size()) != k || static_cast<int>(networks.size()) != k)
        throw std::invalid_argument("ModelParams: per-regime vectors must have K entries");
    if (var_z <= 0) throw std::invalid_argument("ModelParams: var_z must be > 0");
    for (int i = 0; i < k; ++i) {
        if (var_x[i] <= 0 || var_s[i] <= 0 || var_v[i] <= 0)
            throw std::invalid_argument("ModelParams: per-regime variances must be > 0");
        if (networks[i].precision.rows() != num_features ||
            networks[i].precision.cols() != num_features ||
            networks[i].mean.size() != num_features)
            throw std::invalid_argument("ModelParams: network shape");
    }
    if (std::abs(pi.sum() - 1.0) > 1e-9) throw std::invalid_argument("ModelParams: pi must sum to 1");
    for (int l_idx = 0; l_idx < k; ++l_idx) {
        if (std::abs(markov.col(l_idx).sum() - 1.0) > 1e-9)
            throw std::invalid_argument("ModelParams: markov columns must sum to 1");
    }
}

void validate_regime_path(const RegimePath& path, int num_regimes, Eigen::Index num_steps) {
    if (static_cast<Eigen::Index>(path.size()) != num_steps)
        throw std::invalid_argument("regime path length mismatch");
    for (int f : path)
        if (f < 0 || f >= num_regimes) throw std::invalid_argument("regime path entry out of range");
}

}  // namespace missnet
