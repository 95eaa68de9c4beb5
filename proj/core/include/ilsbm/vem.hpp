#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ilsbm/timeline.hpp"

namespace ilsbm {

// Blockmodel parameters: mixing proportions over K groups plus K x K
// interaction / non-interaction rate matrices.
struct BlockParams {
    Eigen::VectorXd lambda;
    Eigen::MatrixXd mu;
    Eigen::MatrixXd nu;

    int n_groups() const { return static_cast<int>(lambda.size()); }
    void validate() const;
};

// tau-weighted sufficient statistics per block pair (g, h): expected
// embedded counts l_mu/l_nu and expected exposures eta/zeta.
struct BlockStats {
    Eigen::MatrixXd l_mu;
    Eigen::MatrixXd l_nu;
    Eigen::MatrixXd eta;
    Eigen::MatrixXd zeta;
};

BlockStats expected_block_stats(const PairStatsTable& table, const Eigen::MatrixXd& tau);

// Per-pair, per-block-pair log-density score consumed by the E-step. Same
// closed form as pair_log_density.
double omega(const PairStats& stats, double mu_gh, double nu_gh);

// Evidence lower bound: expected completed log-likelihood under the
// row-independent variational distribution tau plus its entropy. Returns
// -infinity when some group has zero mixing proportion but positive tau
// mass (a degenerate state, not an error).
double elbo(const PairStatsTable& table, const BlockParams& params, const Eigen::MatrixXd& tau);

// E-step scores s_k for one node: partner-weighted omega sums over the
// node's stored pairs plus log lambda_k. The row update is
// softmax(s) per row.
Eigen::VectorXd tau_row_scores(const PairStatsTable& table, const BlockParams& params,
                               const Eigen::MatrixXd& tau, int node);

struct InnerOptions {
    double tol = 1e-6; // max absolute row change across one pass
    int max_iter = 50; // passes of the fixed-point map (1 = single pass)
};

// E-step: fixed-point iteration of the row-softmax map, rows updated in
// place sequentially in node order, until the largest entry change in a
// pass drops below inner.tol or inner.max_iter passes are done.
Eigen::MatrixXd update_tau(const PairStatsTable& table, const BlockParams& params,
                           Eigen::MatrixXd tau, const InnerOptions& inner = {});

// M-step mixing proportions: column means of tau.
Eigen::VectorXd update_lambda(const Eigen::MatrixXd& tau);

// M-step rates: ratios of expected counts to expected exposures. Blocks with
// no expected counts get rate 0, blocks with no expected exposure get 0/0 ->
// 0; fit() applies the floor/carry-over guards on top of this raw update.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> update_rates(const PairStatsTable& table,
                                                         const Eigen::MatrixXd& tau);

// MAP partition: per-row argmax of tau, ties broken toward the lowest group
// index. Labels are 0-based.
std::vector<int> map_partition(const Eigen::MatrixXd& tau);

enum class InitMode { spectral, random, labels };

struct FitOptions {
    InitMode init = InitMode::spectral;
    std::vector<int> init_labels; // used when init == InitMode::labels
    double tol = 1e-8;            // relative ELBO change stopping rule
    int max_iter = 500;
    std::uint64_t seed = 0;
    double rate_floor = 1e-10;
    InnerOptions inner;
};

struct FitResult {
    BlockParams params;
    Eigen::MatrixXd tau;
    std::vector<int> z_hat;
    std::vector<double> elbo_trace;
    bool converged = false;
    int n_iter = 0;
    std::string note; // set on guarded early termination
};

// Variational EM: initialize tau, then alternate exact M-steps
// (update_rates with guards, update_lambda) and the E-step fixed point,
// tracking the ELBO until its relative change falls below options.tol. A
// trailing M-step aligns the returned parameters with the returned tau, so
// they are exactly stationary given it.
FitResult fit(const PairStatsTable& table, int n_groups, const FitOptions& options = {});
FitResult fit(const NetworkData& network, int n_groups, const FitOptions& options = {});

} // namespace ilsbm
