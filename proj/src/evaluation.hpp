#pragma once

#include "linalg.hpp"
#include "types.hpp"

namespace missnet {

// Root mean square error over the entries where eval_mask = 1.
double rmse(const Matrix& truth, const Matrix& imputed, const MaskMatrix& eval_mask);

// Fraction of matching timesteps maximized over regime relabelings
// (exhaustive for K <= 3, Hungarian assignment above).
double regime_accuracy(const RegimePath& true_path, const RegimePath& est_path, int num_regimes);

}  // namespace missnet
