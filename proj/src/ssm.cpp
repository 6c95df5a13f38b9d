#include "ssm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "errors.hpp"
#include "glasso.hpp"

namespace missnet {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct StepOutcome {
    FilterCell cell;
    double innovation_nll;  // 1/2 v'S^{-1}v + 1/2 logdet S + L/2 log 2pi; 0 when nothing observed
};

// Shared measurement update: condition the predicted state on the observed
// rows at t and score the innovation.
StepOutcome advance(Vector pred_mean, Matrix pred_cov, int k, const ObservedSlice& slice,
                    const ModelParams& params, const Matrix& U_k) {
    const Eigen::Index L = pred_mean.size();
    symmetrize(pred_cov);
    StepOutcome out;
    if (slice.empty()) {
        out.cell = {pred_mean, pred_mean, pred_cov, pred_cov, Matrix(L, 0)};
        out.innovation_nll = 0.0;
        return out;
    }
    const Matrix u_obs = select_rows(U_k, slice);
    Matrix innov_cov = u_obs * pred_cov * u_obs.transpose();
    innov_cov.diagonal().array() += params.var_x[static_cast<std::size_t>(k)];
    SpdFactor factor(innov_cov, "filter: innovation covariance");

    const Vector innovation = slice.values - u_obs * pred_mean;
    const Matrix gain = factor.solve(u_obs * pred_cov).transpose();  // L x |obs|

    Vector mean_filt = pred_mean + gain * innovation;
    Matrix cov_filt = (Matrix::Identity(L, L) - gain * u_obs) * pred_cov;
    symmetrize(cov_filt);

    out.innovation_nll = 0.5 * factor.quadratic_inv(innovation) + 0.5 * factor.log_det() +
                         0.5 * static_cast<double>(L) * kLog2Pi;
    out.cell = {std::move(pred_mean), std::move(mean_filt), std::move(pred_cov),
                std::move(cov_filt), gain};
    return out;
}

StepOutcome advance_initial(int k, const PartialSeries& series, const ModelParams& params,
                            const Matrix& U_k) {
    return advance(params.z0, params.psi0, k, observed_slice(series, 0), params, U_k);
}

StepOutcome advance_from(const FilterCell& prev, int k, const PartialSeries& series,
                         const ModelParams& params, const Matrix& U_k, Eigen::Index t) {
    Vector pred_mean = params.B * prev.mean_filt;
    Matrix pred_cov = params.B * prev.cov_filt * params.B.transpose();
    pred_cov.diagonal().array() += params.var_z;
    return advance(std::move(pred_mean), std::move(pred_cov), k, observed_slice(series, t),
                   params, U_k);
}

double innovation_nll_of(const FilterCell& cell, int k, const ObservedSlice& slice,
                         const ModelParams& params, const Matrix& U_k) {
    if (slice.empty()) return 0.0;
    const Eigen::Index L = cell.mean_pred.size();
    const Matrix u_obs = select_rows(U_k, slice);
    Matrix innov_cov = u_obs * cell.cov_pred * u_obs.transpose();
    innov_cov.diagonal().array() += params.var_x[static_cast<std::size_t>(k)];
    SpdFactor factor(innov_cov, "partial_cost: innovation covariance");
    const Vector innovation = slice.values - u_obs * cell.mean_pred;
    return 0.5 * factor.quadratic_inv(innovation) + 0.5 * factor.log_det() +
           0.5 * static_cast<double>(L) * kLog2Pi;
}

double transition_cost(int k, int prev_regime, const ModelParams& params) {
    const double p = prev_regime < 0 ? params.pi(k) : params.markov(k, prev_regime);
    if (p <= 0.0) return kInf;
    return -std::log(p);
}

}  // namespace

FilterCell initial_step(int k, const PartialSeries& series, const ModelParams& params,
                        const Matrix& U_k) {
    return advance_initial(k, series, params, U_k).cell;
}

FilterCell filter_step(const FilterCell& prev, int k, const PartialSeries& series,
                       const ModelParams& params, const Matrix& U_k, Eigen::Index t) {
    if (t < 1) throw std::invalid_argument("filter_step: t must be >= 1; use initial_step");
    return advance_from(prev, k, series, params, U_k, t).cell;
}

double partial_cost(const FilterCell& cell, int k, int prev_regime, const PartialSeries& series,
                    const ModelParams& params, const Matrix& U_k, const Vector& imputed_t,
                    Eigen::Index t) {
    const double trans = transition_cost(k, prev_regime, params);
    if (trans == kInf) return kInf;
    const double innovation =
        innovation_nll_of(cell, k, observed_slice(series, t), params, U_k);
    const Network& net = params.networks[static_cast<std::size_t>(k)];
    const double network_nll = -gaussian_ll(imputed_t, net.mean, net.precision);
    return innovation + network_nll + trans;
}

ViterbiResult viterbi_decode(const PartialSeries& series, const ModelParams& params,
                             const std::vector<Matrix>& U, const Matrix& imputed) {
    const Eigen::Index T = series.num_steps();
    const int K = params.num_regimes();
    if (static_cast<int>(U.size()) != K)
        throw std::invalid_argument("viterbi_decode: need one observation matrix per regime");
    if (imputed.rows() != series.num_features() || imputed.cols() != T)
        throw std::invalid_argument("viterbi_decode: imputed shape mismatch");

    std::vector<GaussianLogLik> network_ll;
    network_ll.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const Network& net = params.networks[static_cast<std::size_t>(k)];
        network_ll.emplace_back(net.mean, net.precision);
    }

    ViterbiTable table;
    table.cost.resize(T, K);
    table.backptr = Eigen::MatrixXi::Zero(T, K);
    table.filtered.resize(static_cast<std::size_t>(T));
    table.partial.resize(static_cast<std::size_t>(T));

    // t = 0: prior update plus -log pi_k
    table.partial[0].resize(K, 1);
    table.filtered[0].resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        StepOutcome step = advance_initial(k, series, params, U[static_cast<std::size_t>(k)]);
        const double cost = step.innovation_nll - network_ll[static_cast<std::size_t>(k)](imputed.col(0)) +
                            transition_cost(k, -1, params);
        table.partial[0](k, 0) = cost;
        table.cost(0, k) = cost;
        table.filtered[0][static_cast<std::size_t>(k)] = std::move(step.cell);
    }

    for (Eigen::Index t = 1; t < T; ++t) {
        table.partial[static_cast<std::size_t>(t)].resize(K, K);
        table.filtered[static_cast<std::size_t>(t)].resize(static_cast<std::size_t>(K));
        const ObservedSlice slice = observed_slice(series, t);
        std::vector<double> network_term(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k)
            network_term[static_cast<std::size_t>(k)] =
                -network_ll[static_cast<std::size_t>(k)](imputed.col(t));

        for (int k = 0; k < K; ++k) {
            double best_cost = kInf;
            int best_l = 0;
            FilterCell best_cell;
            for (int l = 0; l < K; ++l) {
                const double trans = transition_cost(k, l, params);
                double delta;
                FilterCell cell;
                if (trans == kInf) {
                    delta = kInf;
                } else {
                    const FilterCell& prev = table.filtered[static_cast<std::size_t>(t - 1)]
                                                           [static_cast<std::size_t>(l)];
                    Vector pred_mean = params.B * prev.mean_filt;
                    Matrix pred_cov = params.B * prev.cov_filt * params.B.transpose();
                    pred_cov.diagonal().array() += params.var_z;
                    StepOutcome step = advance(std::move(pred_mean), std::move(pred_cov), k, slice,
                                               params, U[static_cast<std::size_t>(k)]);
                    delta = step.innovation_nll + network_term[static_cast<std::size_t>(k)] + trans;
                    cell = std::move(step.cell);
                }
                table.partial[static_cast<std::size_t>(t)](k, l) = delta;
                const double total =
                    delta == kInf ? kInf : table.cost(t - 1, l) + delta;
                if (total < best_cost) {
                    best_cost = total;
                    best_l = l;
                    best_cell = std::move(cell);
                }
            }
            if (best_cost == kInf)
                throw NumericError("viterbi_decode: no reachable path at t=" + std::to_string(t));
            table.cost(t, k) = best_cost;
            table.backptr(t, k) = best_l;
            table.filtered[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] =
                std::move(best_cell);
        }
    }

    ViterbiResult result;
    result.path.resize(static_cast<std::size_t>(T));
    int best_k = 0;
    for (int k = 1; k < K; ++k)
        if (table.cost(T - 1, k) < table.cost(T - 1, best_k)) best_k = k;
    result.path[static_cast<std::size_t>(T - 1)] = best_k;
    for (Eigen::Index t = T - 1; t > 0; --t)
        result.path[static_cast<std::size_t>(t - 1)] =
            table.backptr(t, result.path[static_cast<std::size_t>(t)]);

    result.path_cells.reserve(static_cast<std::size_t>(T));
    for (Eigen::Index t = 0; t < T; ++t)
        result.path_cells.push_back(
            table.filtered[static_cast<std::size_t>(t)]
                          [static_cast<std::size_t>(result.path[static_cast<std::size_t>(t)])]);

    result.table = std::move(table);
    return result;
}

SmoothedPosterior rts_smooth(const std::vector<FilterCell>& path_cells, const ModelParams& params) {
    const Eigen::Index T = static_cast<Eigen::Index>(path_cells.size());
    if (T < 1) throw std::invalid_argument("rts_smooth: empty filter sequence");
    const Eigen::Index L = path_cells[0].mean_filt.size();

    SmoothedPosterior out;
    out.mean.resize(L, T);
    out.cov.resize(static_cast<std::size_t>(T));
    out.cross.assign(static_cast<std::size_t>(T), Matrix::Zero(L, L));
    out.second.resize(static_cast<std::size_t>(T));

    out.mean.col(T - 1) = path_cells[static_cast<std::size_t>(T - 1)].mean_filt;
    out.cov[static_cast<std::size_t>(T - 1)] = path_cells[static_cast<std::size_t>(T - 1)].cov_filt;

    std::vector<Matrix> smoother_gain(static_cast<std::size_t>(T > 0 ? T - 1 : 0));
    for (Eigen::Index t = T - 2; t >= 0; --t) {
        const FilterCell& cell = path_cells[static_cast<std::size_t>(t)];
        const FilterCell& next = path_cells[static_cast<std::size_t>(t + 1)];
        SpdFactor pred_factor(next.cov_pred, "rts_smooth: predicted covariance");
        // J_t = P_t B' P_{t+1|t}^{-1}
        Matrix j = pred_factor.solve(params.B * cell.cov_filt).transpose();
        Vector mean_s = cell.mean_filt + j * (out.mean.col(t + 1) - params.B * cell.mean_filt);
        Matrix cov_s = cell.cov_filt +
                       j * (out.cov[static_cast<std::size_t>(t + 1)] - next.cov_pred) * j.transpose();
        symmetrize(cov_s);
        out.mean.col(t) = mean_s;
        out.cov[static_cast<std::size_t>(t)] = std::move(cov_s);
        smoother_gain[static_cast<std::size_t>(t)] = std::move(j);
    }

    for (Eigen::Index t = 0; t < T; ++t) {
        out.second[static_cast<std::size_t>(t)] =
            out.cov[static_cast<std::size_t>(t)] + out.mean.col(t) * out.mean.col(t).transpose();
        if (t >= 1) {
            // E[z_t z'_{t-1}] = psi_t J'_{t-1} + mu_t mu'_{t-1}
            out.cross[static_cast<std::size_t>(t)] =
                out.cov[static_cast<std::size_t>(t)] *
                    smoother_gain[static_cast<std::size_t>(t - 1)].transpose() +
                out.mean.col(t) * out.mean.col(t - 1).transpose();
        }
    }
    return out;
}

}  // namespace missnet
