#include "evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace missnet {

namespace {

// Max-total assignment on a square score matrix via the Hungarian algorithm
// (potentials formulation, O(K^3)); returns the best permutation total.
double max_assignment(const Matrix& score) {
    const int n = static_cast<int>(score.rows());
    const double big = score.cwiseAbs().maxCoeff() + 1.0;
    // minimize cost = big - score
    std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<int> match(static_cast<std::size_t>(n + 1), 0);
    std::vector<int> way(static_cast<std::size_t>(n + 1), 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n + 1),
                                 std::numeric_limits<double>::infinity());
        std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = match[static_cast<std::size_t>(j0)];
            double delta = std::numeric_limits<double>::infinity();
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = (big - score(i0 - 1, j - 1)) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0);
    }
    double total = 0.0;
    for (int j = 1; j <= n; ++j) total += score(match[static_cast<std::size_t>(j)] - 1, j - 1);
    return total;
}

}  // namespace

double rmse(const Matrix& truth, const Matrix& imputed, const MaskMatrix& eval_mask) {
    if (truth.rows() != imputed.rows() || truth.cols() != imputed.cols() ||
        truth.rows() != eval_mask.rows() || truth.cols() != eval_mask.cols())
        throw std::invalid_argument("rmse: shape mismatch");
    double sum = 0.0;
    Eigen::Index count = 0;
    for (Eigen::Index t = 0; t < truth.cols(); ++t) {
        for (Eigen::Index i = 0; i < truth.rows(); ++i) {
            if (!eval_mask(i, t)) continue;
            const double d = truth(i, t) - imputed(i, t);
            sum += d * d;
            ++count;
        }
    }
    if (count == 0) throw std::invalid_argument("rmse: empty evaluation mask");
    return std::sqrt(sum / static_cast<double>(count));
}

double regime_accuracy(const RegimePath& true_path, const RegimePath& est_path, int num_regimes) {
    if (true_path.size() != est_path.size())
        throw std::invalid_argument("regime_accuracy: path length mismatch");
    if (true_path.empty()) throw std::invalid_argument("regime_accuracy: empty paths");
    const int K = num_regimes;
    validate_regime_path(true_path, K, static_cast<Eigen::Index>(true_path.size()));
    validate_regime_path(est_path, K, static_cast<Eigen::Index>(est_path.size()));

    Matrix counts = Matrix::Zero(K, K);  // counts(est, true)
    for (std::size_t t = 0; t < true_path.size(); ++t)
        counts(est_path[t], true_path[t]) += 1.0;

    double best = 0.0;
    if (K <= 3) {
        std::vector<int> perm(static_cast<std::size_t>(K));
        std::iota(perm.begin(), perm.end(), 0);
        do {
            double total = 0.0;
            for (int a = 0; a < K; ++a) total += counts(a, perm[static_cast<std::size_t>(a)]);
            best = std::max(best, total);
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        best = max_assignment(counts);
    }
    return best / static_cast<double>(true_path.size());
}

}  // namespace missnet
