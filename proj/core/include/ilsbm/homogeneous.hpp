#pragma once

#include <span>

#include "ilsbm/timeline.hpp"

namespace ilsbm {

// Closed-form maximum likelihood fit of the single-block model.
// mu_hat = (sum of embedded interaction counts) / (total interaction time),
// nu_hat analogously for non-interactions. A rate whose count sum is zero is
// reported as 0 with the matching degenerate flag set; the log-likelihood
// uses the 0*log(0) = 0 convention so degenerate fits stay finite.
struct HomogeneousFit {
    double mu_hat = 0.0;
    double nu_hat = 0.0;
    double loglik = 0.0;
    bool mu_degenerate = false;
    bool nu_degenerate = false;
};

HomogeneousFit fit_homogeneous(std::span<const PairStats> stats);
HomogeneousFit fit_homogeneous(const PairStatsTable& table);

} // namespace ilsbm
