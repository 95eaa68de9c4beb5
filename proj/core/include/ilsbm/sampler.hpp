#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ilsbm/rng.hpp"
#include "ilsbm/timeline.hpp"

namespace ilsbm {

// Generative configuration: K groups with mixing proportions `lambda`,
// interaction rates mu(g,h) and non-interaction rates nu(g,h) between a
// group-g node and a group-h node.
struct GeneratorConfig {
    int n_nodes = 0;
    int n_groups = 0;
    double horizon = 0.0;
    Eigen::VectorXd lambda;
    Eigen::MatrixXd mu;
    Eigen::MatrixXd nu;
    std::uint64_t seed = 0;
    bool directed = true;

    void validate() const;
};

// Draws alternating exponential segment lengths (rate `mu` while
// interacting, `nu` while not) starting from `initial_state`, stopping at
// the first draw whose cumulative sum reaches `horizon` and truncating it so
// the total is exactly the horizon.
EdgeTimeline sample_alternating_lengths(double mu, double nu, bool initial_state,
                                        double horizon, Rng& rng);

struct SampledNetwork {
    NetworkData network;
    std::vector<int> allocations; // ground-truth group per node, 0-based
};

// Samples group allocations from lambda, a uniform initial state per pair,
// and a timeline per pair from the block rates. Each pair draws from its own
// substream of config.seed, so results do not depend on evaluation order.
SampledNetwork sample_network(const GeneratorConfig& config);

// Random parameter set: lambda ~ symmetric Dirichlet(0.5), every rate i.i.d.
// Gamma(shape = xi, rate = xi) (mean 1, variance 1/xi; large xi means nearly
// indistinguishable groups).
struct RateDraw {
    Eigen::VectorXd lambda;
    Eigen::MatrixXd mu;
    Eigen::MatrixXd nu;
};

RateDraw sample_study1_params(int n_groups, double xi, Rng& rng);

// Community-structure rates: mu has `epsilon` on the diagonal and `theta`
// off it; nu is the opposite. For K = 1 this degenerates to mu = epsilon,
// nu = theta.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> make_community_params(int n_groups, double epsilon,
                                                                  double theta);

} // namespace ilsbm
