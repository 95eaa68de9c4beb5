#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ilsbm/errors.hpp"

namespace ilsbm {

// Relative tolerance for "segment lengths sum to the horizon" checks.
inline constexpr double kLengthSumRelTol = 1e-9;

// One node pair's history on [0, T]: an alternating sequence of interaction
// and non-interaction segments. Segment w (1-based) is in state
// `initial_state` when w is odd and in the flipped state when w is even.
// The first and last segments are truncated observations: they only bound
// the true lengths from below.
struct EdgeTimeline {
    bool initial_state = false;
    std::vector<double> lengths;

    int segment_count() const { return static_cast<int>(lengths.size()); }

    // State of segment w, w in 1..W.
    bool state_of(int w) const { return (w % 2 == 1) ? initial_state : !initial_state; }

    // Throws validation_error if any length is non-positive, the list is
    // empty, or the lengths do not sum to `horizon` within kLengthSumRelTol.
    // `label` names the pair in error messages.
    void validate(double horizon, const std::string& label = {}) const;
};

// The four per-pair sufficient statistics: embedded segment counts by state
// and total exposure by state (truncated first/last segments included in the
// exposures only).
struct PairStats {
    std::int64_t a_plus = 0;  // embedded interaction segments
    std::int64_t a_minus = 0; // embedded non-interaction segments
    double x_plus = 0.0;      // total interaction time
    double x_minus = 0.0;     // total non-interaction time
};

// A continuously observed interaction network. Pairs never seen interacting
// may be omitted from `timelines`; they are implied to spend all of [0, T]
// in the non-interaction state. In undirected mode only keys with i < j are
// stored.
struct NetworkData {
    int n_nodes = 0;
    double horizon = 0.0;
    bool directed = true;
    std::map<std::pair<int, int>, EdgeTimeline> timelines;

    const EdgeTimeline* find(int i, int j) const;

    // Checks node indices, key conventions and every timeline.
    void validate() const;
};

// A raw interaction interval: node i interacts with node j on
// [start, start + length]. Node indices are 0-based internally.
struct InteractionRecord {
    int i = 0;
    int j = 0;
    double start = 0.0;
    double length = 0.0;
};

// Reduces a timeline to its sufficient statistics. Validates first.
PairStats compute_pair_stats(const EdgeTimeline& timeline, double horizon);

// Builds a network from interaction intervals. Per pair: sorts intervals,
// merges abutting ones, rejects overlaps and intervals outside [0, T], and
// fills the gaps with non-interaction segments. Pairs without records are
// left absent (single non-interaction segment implied).
NetworkData from_events(const std::vector<InteractionRecord>& records, int n_nodes,
                        double horizon, bool directed);

// Log-density of one pair's history given interaction rate `mu` and
// non-interaction rate `nu`: embedded segments contribute exponential
// log-densities, truncated segments log-survival terms. In terms of the
// sufficient statistics this collapses to
//   a_plus*log(mu) + a_minus*log(nu) - mu*x_plus - nu*x_minus.
double pair_log_density(const PairStats& stats, double mu, double nu);

// Interaction intervals (start, length) reconstructed from a timeline.
std::vector<std::pair<double, double>> to_intervals(const EdgeTimeline& timeline);

// Flat per-pair statistics over *every* node pair of the network, absent
// pairs materialized with stats (0, 0, 0, T) and one segment. Entries are in
// lexicographic (i, j) order; undirected networks enumerate i < j only.
struct PairStatsEntry {
    int i = 0;
    int j = 0;
    int segment_count = 1;
    PairStats stats;
};

struct PairStatsTable {
    int n_nodes = 0;
    double horizon = 0.0;
    bool directed = true;
    std::vector<PairStatsEntry> entries;

    // Sum of segment counts over all pairs.
    std::int64_t total_segments() const;
};

PairStatsTable build_pair_stats_table(const NetworkData& network);

} // namespace ilsbm
