#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ilsbm/rng.hpp"
#include "ilsbm/timeline.hpp"

namespace ilsbm {

// N x N matrix of total interaction durations: entry (i, j) is the x_plus
// statistic of pair (i, j), 0 for pairs that never interact. Symmetric by
// construction in undirected mode.
Eigen::MatrixXd total_interaction_matrix(const NetworkData& network);
Eigen::MatrixXd total_interaction_matrix(const PairStatsTable& table);

// Symmetric non-negative affinity S = log1p(M + M^T) / 2 entrywise, zero
// where the total duration is zero and on the diagonal. log1p (rather than a
// bare log) keeps never-interacting pairs at affinity exactly 0 and small
// positive totals non-negative.
Eigen::MatrixXd affinity(const Eigen::MatrixXd& m);

// K-means with k-means++ seeding over the rows of `points`. Runs `restarts`
// seedings and keeps the lowest-inertia labeling (first occurrence wins
// ties). `inertia_trace` records the objective after each Lloyd iteration of
// the winning restart.
struct KMeansResult {
    std::vector<int> labels;
    double inertia = 0.0;
    std::vector<double> inertia_trace;
};

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, Rng& rng, int restarts = 10);

// Normalized spectral clustering: row-normalized eigenvectors of the K
// smallest eigenvalues of L_sym = I - D^{-1/2} S D^{-1/2} (row-sum degrees
// floored at 1e-12), clustered with kmeans(). Nodes with an all-zero
// affinity row keep the zero embedding and land with the nearest centroid.
std::vector<int> spectral_kmeans(const Eigen::MatrixXd& s, int n_groups, Rng& rng);

} // namespace ilsbm
