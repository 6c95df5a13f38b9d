#pragma once

#include <vector>

#include "linalg.hpp"
#include "types.hpp"

namespace missnet {

// One-step filter state for a (t, k, l) regime-pair cell.
struct FilterCell {
    Vector mean_pred;  // mu_{t|t-1}
    Vector mean_filt;  // mu_{t|t}
    Matrix cov_pred;   // psi_{t|t-1}
    Matrix cov_filt;   // psi_{t|t}
    Matrix gain;       // L x |observed at t|; empty when nothing is observed
};

struct ViterbiTable {
    Matrix cost;               // T x K accumulated path costs
    Eigen::MatrixXi backptr;   // T x K predecessor regimes (row 0 unused)
    std::vector<std::vector<FilterCell>> filtered;  // [t][k] best cell ending in regime k at t
    std::vector<Matrix> partial;  // [0]: K x 1 first-step costs; [t>=1]: K x K costs (k = to, l = from)
};

struct ViterbiResult {
    RegimePath path;
    std::vector<FilterCell> path_cells;  // filter states along the winning path
    ViterbiTable table;
};

// t = 0 filter update against the prior (z0, psi0). Empty observation set
// leaves the prior untouched.
FilterCell initial_step(int k, const PartialSeries& series, const ModelParams& params,
                        const Matrix& U_k);

// Filter update at t >= 1 from the best cell of regime l at t-1.
FilterCell filter_step(const FilterCell& prev, int k, const PartialSeries& series,
                       const ModelParams& params, const Matrix& U_k, Eigen::Index t);

// Cost of switching to regime k at t from regime l at t-1 (prev_regime = -1
// uses the initial distribution): innovation negative log-likelihood plus the
// network Gaussian term on the imputed vector minus the log transition
// probability. Zero transition probability yields +infinity, not an error.
double partial_cost(const FilterCell& cell, int k, int prev_regime, const PartialSeries& series,
                    const ModelParams& params, const Matrix& U_k, const Vector& imputed_t,
                    Eigen::Index t);

// Minimum-total-cost regime path; at each step only the best incoming cell per
// regime is propagated. Ties go to the lowest regime index.
ViterbiResult viterbi_decode(const PartialSeries& series, const ModelParams& params,
                             const std::vector<Matrix>& U, const Matrix& imputed);

// Backward pass over the filter states of one path, producing smoothed means,
// covariances, adjacent cross moments E[z_t z'_{t-1}], and second moments.
SmoothedPosterior rts_smooth(const std::vector<FilterCell>& path_cells, const ModelParams& params);

}  // namespace missnet
