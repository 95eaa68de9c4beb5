#include "ilsbm/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "ilsbm/errors.hpp"

namespace ilsbm {

namespace {

constexpr std::int64_t kMaxSegments = 100'000'000;

// Substream tags; pair streams start after these.
constexpr std::uint64_t kAllocationStream = 0;
constexpr std::uint64_t kPairStreamBase = 1;

void require_positive_rates(const Eigen::MatrixXd& m, const char* name) {
    if ((m.array() <= 0.0).any())
        throw std::domain_error(std::string(name) + " rates must be strictly positive");
}

} // namespace

void GeneratorConfig::validate() const {
    if (n_nodes < 1) throw std::invalid_argument("config: n_nodes must be >= 1");
    if (n_groups < 1) throw std::invalid_argument("config: n_groups must be >= 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("config: horizon must be positive");
    if (lambda.size() != n_groups) throw std::invalid_argument("config: lambda has wrong size");
    if ((lambda.array() < 0.0).any() || std::abs(lambda.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("config: lambda must be a probability vector");
    if (mu.rows() != n_groups || mu.cols() != n_groups || nu.rows() != n_groups ||
        nu.cols() != n_groups)
        throw std::invalid_argument("config: rate matrices must be K x K");
    require_positive_rates(mu, "config: mu");
    require_positive_rates(nu, "config: nu");
}

EdgeTimeline sample_alternating_lengths(double mu, double nu, bool initial_state,
                                        double horizon, Rng& rng) {
    if (!(mu > 0.0) || !(nu > 0.0))
        throw std::domain_error("sample_alternating_lengths: rates must be positive");
    if (!(horizon > 0.0))
        throw std::invalid_argument("sample_alternating_lengths: horizon must be positive");

    EdgeTimeline tl;
    tl.initial_state = initial_state;
    bool state = initial_state;
    double acc = 0.0;
    for (std::int64_t w = 0;; ++w) {
        if (w >= kMaxSegments)
            throw numerical_error("sample_alternating_lengths: segment cap exceeded");
        const double x = rng.exponential(state ? mu : nu);
        if (acc + x >= horizon) {
            tl.lengths.push_back(horizon - acc);
            break;
        }
        tl.lengths.push_back(x);
        acc += x;
        state = !state;
    }
    return tl;
}

SampledNetwork sample_network(const GeneratorConfig& config) {
    config.validate();

    SampledNetwork out;
    out.network.n_nodes = config.n_nodes;
    out.network.horizon = config.horizon;
    out.network.directed = config.directed;

    std::vector<double> lambda(config.lambda.data(), config.lambda.data() + config.lambda.size());
    Rng alloc_rng(derive_seed(config.seed, kAllocationStream));
    out.allocations.resize(static_cast<std::size_t>(config.n_nodes));
    for (int i = 0; i < config.n_nodes; ++i)
        out.allocations[static_cast<std::size_t>(i)] = alloc_rng.categorical(lambda);

    std::uint64_t pair_index = 0;
    for (int i = 0; i < config.n_nodes; ++i) {
        const int j_begin = config.directed ? 0 : i + 1;
        for (int j = j_begin; j < config.n_nodes; ++j) {
            if (i == j) continue;
            Rng pair_rng(derive_seed(config.seed, kPairStreamBase + pair_index));
            ++pair_index;
            const int g = out.allocations[static_cast<std::size_t>(i)];
            const int h = out.allocations[static_cast<std::size_t>(j)];
            const bool initial = pair_rng.uniform_index(2) == 1;
            EdgeTimeline tl = sample_alternating_lengths(config.mu(g, h), config.nu(g, h),
                                                         initial, config.horizon, pair_rng);
            out.network.timelines.emplace(std::make_pair(i, j), std::move(tl));
        }
    }
    return out;
}

RateDraw sample_study1_params(int n_groups, double xi, Rng& rng) {
    if (n_groups < 1) throw std::invalid_argument("sample_study1_params: n_groups must be >= 1");
    if (!(xi > 0.0)) throw std::domain_error("sample_study1_params: xi must be positive");

    RateDraw draw;
    const std::vector<double> lam = rng.dirichlet_symmetric(n_groups, 0.5);
    draw.lambda = Eigen::Map<const Eigen::VectorXd>(lam.data(), n_groups);
    draw.mu.resize(n_groups, n_groups);
    draw.nu.resize(n_groups, n_groups);
    for (int g = 0; g < n_groups; ++g)
        for (int h = 0; h < n_groups; ++h) draw.mu(g, h) = rng.gamma(xi, xi);
    for (int g = 0; g < n_groups; ++g)
        for (int h = 0; h < n_groups; ++h) draw.nu(g, h) = rng.gamma(xi, xi);
    return draw;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> make_community_params(int n_groups, double epsilon,
                                                                  double theta) {
    if (n_groups < 1) throw std::invalid_argument("make_community_params: n_groups must be >= 1");
    if (!(epsilon > 0.0) || !(theta > 0.0))
        throw std::domain_error("make_community_params: epsilon and theta must be positive");
    Eigen::MatrixXd mu = Eigen::MatrixXd::Constant(n_groups, n_groups, theta);
    Eigen::MatrixXd nu = Eigen::MatrixXd::Constant(n_groups, n_groups, epsilon);
    mu.diagonal().setConstant(epsilon);
    nu.diagonal().setConstant(theta);
    return {mu, nu};
}

} // namespace ilsbm
