#include "ilsbm/vem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ilsbm/errors.hpp"
#include "ilsbm/rng.hpp"
#include "ilsbm/spectral_init.hpp"

namespace ilsbm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Substream tags for fit-level randomness.
constexpr std::uint64_t kSpectralStream = 0x5BEC;
constexpr std::uint64_t kRandomInitStream = 0x7A11;

double xlogy(double x, double y) {
    return x > 0.0 ? x * std::log(y) : 0.0;
}

} // namespace

void BlockParams::validate() const {
    const int k = n_groups();
    if (k < 1) throw std::invalid_argument("params: need at least one group");
    if ((lambda.array() < 0.0).any() || std::abs(lambda.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("params: lambda must be a probability vector");
    if (mu.rows() != k || mu.cols() != k || nu.rows() != k || nu.cols() != k)
        throw std::invalid_argument("params: rate matrices must be K x K");
    if ((mu.array() <= 0.0).any() || (nu.array() <= 0.0).any())
        throw std::domain_error("params: rates must be strictly positive");
}

BlockStats expected_block_stats(const PairStatsTable& table, const Eigen::MatrixXd& tau) {
    const int k = static_cast<int>(tau.cols());
    BlockStats bs{Eigen::MatrixXd::Zero(k, k), Eigen::MatrixXd::Zero(k, k),
                  Eigen::MatrixXd::Zero(k, k), Eigen::MatrixXd::Zero(k, k)};
    for (const PairStatsEntry& e : table.entries) {
        const double a_plus = static_cast<double>(e.stats.a_plus);
        const double a_minus = static_cast<double>(e.stats.a_minus);
        for (int g = 0; g < k; ++g) {
            const double ti = tau(e.i, g);
            if (ti == 0.0) continue;
            for (int h = 0; h < k; ++h) {
                const double w = ti * tau(e.j, h);
                bs.l_mu(g, h) += w * a_plus;
                bs.l_nu(g, h) += w * a_minus;
                bs.eta(g, h) += w * e.stats.x_plus;
                bs.zeta(g, h) += w * e.stats.x_minus;
            }
        }
    }
    return bs;
}

double omega(const PairStats& stats, double mu_gh, double nu_gh) {
    if (!(mu_gh > 0.0) || !(nu_gh > 0.0))
        throw std::domain_error("omega: rates must be positive");
    return static_cast<double>(stats.a_plus) * std::log(mu_gh) +
           static_cast<double>(stats.a_minus) * std::log(nu_gh) - stats.x_plus * mu_gh -
           stats.x_minus * nu_gh;
}

double elbo(const PairStatsTable& table, const BlockParams& params, const Eigen::MatrixXd& tau) {
    const int k = params.n_groups();
    const Eigen::Index n = tau.rows();
    if (tau.cols() != k) throw std::invalid_argument("elbo: tau has wrong column count");
    if (n != table.n_nodes) throw std::invalid_argument("elbo: tau has wrong row count");

    const BlockStats bs = expected_block_stats(table, tau);
    double value = 0.0;
    for (int g = 0; g < k; ++g) {
        for (int h = 0; h < k; ++h) {
            value += xlogy(bs.l_mu(g, h), params.mu(g, h)) - params.mu(g, h) * bs.eta(g, h);
            value += xlogy(bs.l_nu(g, h), params.nu(g, h)) - params.nu(g, h) * bs.zeta(g, h);
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int g = 0; g < k; ++g) {
            const double t = tau(i, g);
            if (t > 0.0) {
                value += t * std::log(params.lambda(g)); // -inf when lambda(g) == 0
                value -= t * std::log(t);
            }
        }
    }
    return value;
}

namespace {

// Per-node references into the stats table: entry index, the partner node,
// and whether the node appears as the pair's first index.
struct Incidence {
    int entry;
    int partner;
    bool as_source;
};

std::vector<std::vector<Incidence>> build_incidence(const PairStatsTable& table) {
    std::vector<std::vector<Incidence>> inc(static_cast<std::size_t>(table.n_nodes));
    for (int e = 0; e < static_cast<int>(table.entries.size()); ++e) {
        const PairStatsEntry& entry = table.entries[static_cast<std::size_t>(e)];
        inc[static_cast<std::size_t>(entry.i)].push_back({e, entry.j, true});
        inc[static_cast<std::size_t>(entry.j)].push_back({e, entry.i, false});
    }
    return inc;
}

Eigen::VectorXd row_scores(const PairStatsTable& table, const std::vector<Incidence>& incidences,
                           const Eigen::MatrixXd& log_mu, const Eigen::MatrixXd& log_nu,
                           const Eigen::MatrixXd& mu, const Eigen::MatrixXd& nu,
                           const Eigen::VectorXd& log_lambda, const Eigen::MatrixXd& tau) {
    const int k = static_cast<int>(log_lambda.size());
    Eigen::VectorXd scores = log_lambda;
    for (const Incidence& inc : incidences) {
        const PairStats& s = table.entries[static_cast<std::size_t>(inc.entry)].stats;
        const double a_plus = static_cast<double>(s.a_plus);
        const double a_minus = static_cast<double>(s.a_minus);
        for (int h = 0; h < k; ++h) {
            const double w = tau(inc.partner, h);
            if (w == 0.0) continue;
            for (int g = 0; g < k; ++g) {
                // as_source: pair (node, partner) uses rates (g, h);
                // otherwise pair (partner, node) uses rates (h, g).
                const double lm = inc.as_source ? log_mu(g, h) : log_mu(h, g);
                const double ln = inc.as_source ? log_nu(g, h) : log_nu(h, g);
                const double m = inc.as_source ? mu(g, h) : mu(h, g);
                const double v = inc.as_source ? nu(g, h) : nu(h, g);
                scores(g) += w * (a_plus * lm + a_minus * ln - s.x_plus * m - s.x_minus * v);
            }
        }
    }
    return scores;
}

// Softmax with max-subtraction; -inf scores map to exactly 0.
void softmax_into_row(const Eigen::VectorXd& scores, Eigen::MatrixXd& tau, int node) {
    const int k = static_cast<int>(scores.size());
    double max_score = kNegInf;
    for (int g = 0; g < k; ++g) {
        if (std::isnan(scores(g)))
            throw numerical_error("update_tau: non-finite score at node " + std::to_string(node));
        max_score = std::max(max_score, scores(g));
    }
    if (max_score == kNegInf)
        throw numerical_error("update_tau: all scores -inf at node " + std::to_string(node));
    double total = 0.0;
    for (int g = 0; g < k; ++g) {
        const double e = std::exp(scores(g) - max_score);
        tau(node, g) = e;
        total += e;
    }
    for (int g = 0; g < k; ++g) tau(node, g) /= total;
}

Eigen::MatrixXd update_tau_impl(const PairStatsTable& table,
                                const std::vector<std::vector<Incidence>>& incidence,
                                const BlockParams& params, Eigen::MatrixXd tau,
                                const InnerOptions& inner) {
    const int k = params.n_groups();
    const int n = table.n_nodes;
    if (k == 1) {
        tau.setOnes();
        return tau;
    }
    const Eigen::MatrixXd log_mu = params.mu.array().log();
    const Eigen::MatrixXd log_nu = params.nu.array().log();
    Eigen::VectorXd log_lambda(k);
    for (int g = 0; g < k; ++g)
        log_lambda(g) = params.lambda(g) > 0.0 ? std::log(params.lambda(g)) : kNegInf;

    for (int pass = 0; pass < inner.max_iter; ++pass) {
        double max_change = 0.0;
        for (int node = 0; node < n; ++node) {
            const Eigen::VectorXd scores =
                row_scores(table, incidence[static_cast<std::size_t>(node)], log_mu, log_nu,
                           params.mu, params.nu, log_lambda, tau);
            Eigen::RowVectorXd old_row = tau.row(node);
            softmax_into_row(scores, tau, node);
            max_change = std::max(max_change, (tau.row(node) - old_row).cwiseAbs().maxCoeff());
        }
        if (max_change < inner.tol) break;
    }
    return tau;
}

} // namespace

Eigen::VectorXd tau_row_scores(const PairStatsTable& table, const BlockParams& params,
                               const Eigen::MatrixXd& tau, int node) {
    if (node < 0 || node >= table.n_nodes) throw std::invalid_argument("tau_row_scores: bad node");
    const int k = params.n_groups();
    const Eigen::MatrixXd log_mu = params.mu.array().log();
    const Eigen::MatrixXd log_nu = params.nu.array().log();
    Eigen::VectorXd log_lambda(k);
    for (int g = 0; g < k; ++g)
        log_lambda(g) = params.lambda(g) > 0.0 ? std::log(params.lambda(g)) : kNegInf;
    std::vector<Incidence> incidences;
    for (int e = 0; e < static_cast<int>(table.entries.size()); ++e) {
        const PairStatsEntry& entry = table.entries[static_cast<std::size_t>(e)];
        if (entry.i == node) incidences.push_back({e, entry.j, true});
        if (entry.j == node) incidences.push_back({e, entry.i, false});
    }
    return row_scores(table, incidences, log_mu, log_nu, params.mu, params.nu, log_lambda, tau);
}

Eigen::MatrixXd update_tau(const PairStatsTable& table, const BlockParams& params,
                           Eigen::MatrixXd tau, const InnerOptions& inner) {
    if (tau.rows() != table.n_nodes || tau.cols() != params.n_groups())
        throw std::invalid_argument("update_tau: tau shape mismatch");
    return update_tau_impl(table, build_incidence(table), params, std::move(tau), inner);
}

Eigen::VectorXd update_lambda(const Eigen::MatrixXd& tau) {
    if (tau.rows() == 0) throw std::invalid_argument("update_lambda: empty tau");
    return tau.colwise().mean();
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> update_rates(const PairStatsTable& table,
                                                         const Eigen::MatrixXd& tau) {
    const BlockStats bs = expected_block_stats(table, tau);
    const int k = static_cast<int>(tau.cols());
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(k, k);
    Eigen::MatrixXd nu = Eigen::MatrixXd::Zero(k, k);
    for (int g = 0; g < k; ++g) {
        for (int h = 0; h < k; ++h) {
            if (bs.l_mu(g, h) > 0.0) mu(g, h) = bs.l_mu(g, h) / bs.eta(g, h);
            if (bs.l_nu(g, h) > 0.0) nu(g, h) = bs.l_nu(g, h) / bs.zeta(g, h);
        }
    }
    return {mu, nu};
}

std::vector<int> map_partition(const Eigen::MatrixXd& tau) {
    std::vector<int> z(static_cast<std::size_t>(tau.rows()));
    for (Eigen::Index i = 0; i < tau.rows(); ++i) {
        int best = 0;
        for (int g = 1; g < tau.cols(); ++g)
            if (tau(i, g) > tau(i, best)) best = g;
        z[static_cast<std::size_t>(i)] = best;
    }
    return z;
}

namespace {

Eigen::MatrixXd one_hot_tau(const std::vector<int>& labels, int n_groups) {
    Eigen::MatrixXd tau = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), n_groups);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= n_groups)
            throw std::invalid_argument("fit: init label out of range at node " +
                                        std::to_string(i));
        tau(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
    }
    return tau;
}

Eigen::MatrixXd initial_tau(const PairStatsTable& table, int n_groups, const FitOptions& options) {
    const int n = table.n_nodes;
    switch (options.init) {
        case InitMode::spectral: {
            Rng rng(derive_seed(options.seed, kSpectralStream));
            const Eigen::MatrixXd s = affinity(total_interaction_matrix(table));
            return one_hot_tau(spectral_kmeans(s, n_groups, rng), n_groups);
        }
        case InitMode::random: {
            Rng rng(derive_seed(options.seed, kRandomInitStream));
            Eigen::MatrixXd tau(n, n_groups);
            for (int i = 0; i < n; ++i) {
                const std::vector<double> row = rng.dirichlet_symmetric(n_groups, 1.0);
                for (int g = 0; g < n_groups; ++g) tau(i, g) = row[static_cast<std::size_t>(g)];
            }
            return tau;
        }
        case InitMode::labels: {
            if (static_cast<int>(options.init_labels.size()) != n)
                throw std::invalid_argument("fit: init_labels size must equal node count");
            return one_hot_tau(options.init_labels, n_groups);
        }
    }
    throw std::invalid_argument("fit: unknown init mode");
}

// M-step for the rates with the degeneracy guards: blocks with expected
// counts get the MLE ratio floored at rate_floor, blocks with zero expected
// exposure keep their previous rate.
void guarded_rate_update(const BlockStats& bs, double rate_floor, Eigen::MatrixXd& mu,
                         Eigen::MatrixXd& nu) {
    const int k = static_cast<int>(mu.rows());
    for (int g = 0; g < k; ++g) {
        for (int h = 0; h < k; ++h) {
            if (bs.eta(g, h) > 0.0) mu(g, h) = std::max(bs.l_mu(g, h) / bs.eta(g, h), rate_floor);
            if (bs.zeta(g, h) > 0.0) nu(g, h) = std::max(bs.l_nu(g, h) / bs.zeta(g, h), rate_floor);
        }
    }
}

} // namespace

FitResult fit(const PairStatsTable& table, int n_groups, const FitOptions& options) {
    const int n = table.n_nodes;
    if (n_groups < 1) throw std::invalid_argument("fit: K must be >= 1");
    if (n_groups > n) throw std::invalid_argument("fit: K exceeds the node count");
    if (options.max_iter < 1) throw std::invalid_argument("fit: max_iter must be >= 1");

    const std::vector<std::vector<Incidence>> incidence = build_incidence(table);

    FitResult result;
    result.tau = initial_tau(table, n_groups, options);
    result.params.lambda = Eigen::VectorXd::Constant(n_groups, 1.0 / n_groups);
    result.params.mu = Eigen::MatrixXd::Ones(n_groups, n_groups);
    result.params.nu = Eigen::MatrixXd::Ones(n_groups, n_groups);

    double prev_elbo = kNegInf;
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        // M-step from the current responsibilities.
        const BlockStats bs = expected_block_stats(table, result.tau);
        guarded_rate_update(bs, options.rate_floor, result.params.mu, result.params.nu);
        result.params.lambda = update_lambda(result.tau);

        // E-step fixed point.
        const Eigen::MatrixXd tau_before = result.tau;
        result.tau = update_tau_impl(table, incidence, result.params, std::move(result.tau),
                                     options.inner);

        double value = elbo(table, result.params, result.tau);
        if (!std::isfinite(value))
            throw numerical_error("fit: ELBO is not finite at iteration " + std::to_string(iter));

        result.n_iter = iter;
        if (iter > 1) {
            const double scale = std::max(1.0, std::abs(prev_elbo));
            if (value < prev_elbo - 1e-8 * scale) {
                // The truncated inner fixed point backtracked; revert its
                // move and stop. The parameters already match tau_before
                // exactly, so no trailing refresh is needed.
                result.tau = tau_before;
                value = elbo(table, result.params, result.tau);
                result.elbo_trace.push_back(value);
                result.converged = true;
                result.note = "fixed-point truncation";
                result.z_hat = map_partition(result.tau);
                return result;
            }
            result.elbo_trace.push_back(value);
            if (std::abs(value - prev_elbo) < options.tol * scale) {
                result.converged = true;
                prev_elbo = value;
                break;
            }
        } else {
            result.elbo_trace.push_back(value);
        }
        prev_elbo = value;
    }

    // Trailing M-step: the returned parameters are exact maximizers given
    // the returned tau.
    const BlockStats bs = expected_block_stats(table, result.tau);
    guarded_rate_update(bs, options.rate_floor, result.params.mu, result.params.nu);
    result.params.lambda = update_lambda(result.tau);
    result.elbo_trace.push_back(elbo(table, result.params, result.tau));
    result.z_hat = map_partition(result.tau);
    return result;
}

FitResult fit(const NetworkData& network, int n_groups, const FitOptions& options) {
    return fit(build_pair_stats_table(network), n_groups, options);
}

} // namespace ilsbm
