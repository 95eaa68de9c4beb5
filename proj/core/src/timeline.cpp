#include "ilsbm/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ilsbm {

namespace {

std::string pair_label(int i, int j) {
    std::ostringstream os;
    os << "(" << i << "," << j << ")";
    return os.str();
}

} // namespace

void EdgeTimeline::validate(double horizon, const std::string& label) const {
    const std::string where = label.empty() ? std::string("timeline") : "timeline " + label;
    if (horizon <= 0.0)
        throw validation_error(where + ": horizon must be positive");
    if (lengths.empty())
        throw validation_error(where + ": needs at least one segment");
    double total = 0.0;
    for (std::size_t w = 0; w < lengths.size(); ++w) {
        if (!(lengths[w] > 0.0))
            throw validation_error(where + ": segment " + std::to_string(w + 1) +
                                   " has non-positive length");
        total += lengths[w];
    }
    if (std::abs(total - horizon) > kLengthSumRelTol * horizon)
        throw validation_error(where + ": segment lengths sum to " + std::to_string(total) +
                               ", expected horizon " + std::to_string(horizon));
}

const EdgeTimeline* NetworkData::find(int i, int j) const {
    auto key = std::make_pair(i, j);
    if (!directed && i > j) key = std::make_pair(j, i);
    auto it = timelines.find(key);
    return it == timelines.end() ? nullptr : &it->second;
}

void NetworkData::validate() const {
    if (n_nodes < 1) throw validation_error("network: node count must be >= 1");
    if (horizon <= 0.0) throw validation_error("network: horizon must be positive");
    for (const auto& [key, tl] : timelines) {
        const auto [i, j] = key;
        if (i == j) throw validation_error("network: self pair " + pair_label(i, j));
        if (i < 0 || j < 0 || i >= n_nodes || j >= n_nodes)
            throw validation_error("network: pair " + pair_label(i, j) + " out of range");
        if (!directed && i > j)
            throw validation_error("network: undirected pair " + pair_label(i, j) +
                                   " must be stored with i < j");
        tl.validate(horizon, pair_label(i, j));
    }
}

PairStats compute_pair_stats(const EdgeTimeline& timeline, double horizon) {
    timeline.validate(horizon);
    PairStats s;
    const int w_count = timeline.segment_count();
    for (int w = 1; w <= w_count; ++w) {
        const bool interacting = timeline.state_of(w);
        const double x = timeline.lengths[static_cast<std::size_t>(w - 1)];
        if (interacting)
            s.x_plus += x;
        else
            s.x_minus += x;
        if (w > 1 && w < w_count) {
            if (interacting)
                ++s.a_plus;
            else
                ++s.a_minus;
        }
    }
    return s;
}

namespace {

struct Interval {
    double start;
    double end;
};

// Sorts, rejects overlaps, merges abutting intervals. `tol` absorbs
// floating-point slack in both checks.
std::vector<Interval> normalize_intervals(std::vector<Interval> xs, double tol,
                                          const std::string& label) {
    std::sort(xs.begin(), xs.end(), [](const Interval& a, const Interval& b) {
        return a.start < b.start;
    });
    std::vector<Interval> merged;
    for (const Interval& iv : xs) {
        if (!merged.empty()) {
            Interval& prev = merged.back();
            if (iv.start < prev.end - tol)
                throw validation_error("pair " + label + ": overlapping intervals");
            if (iv.start <= prev.end + tol) {
                prev.end = std::max(prev.end, iv.end);
                continue;
            }
        }
        merged.push_back(iv);
    }
    return merged;
}

} // namespace

NetworkData from_events(const std::vector<InteractionRecord>& records, int n_nodes,
                        double horizon, bool directed) {
    if (n_nodes < 1) throw validation_error("from_events: node count must be >= 1");
    if (horizon <= 0.0) throw validation_error("from_events: horizon must be positive");
    const double tol = kLengthSumRelTol * horizon;

    std::map<std::pair<int, int>, std::vector<Interval>> by_pair;
    for (const InteractionRecord& r : records) {
        int i = r.i;
        int j = r.j;
        if (i == j) throw validation_error("from_events: self pair " + pair_label(i, j));
        if (i < 0 || j < 0 || i >= n_nodes || j >= n_nodes)
            throw validation_error("from_events: pair " + pair_label(i, j) + " out of range");
        if (!directed && i > j) std::swap(i, j);
        if (!(r.length > 0.0))
            throw validation_error("from_events: pair " + pair_label(i, j) +
                                   ": interval length must be positive");
        if (r.start < -tol || r.start + r.length > horizon + tol)
            throw validation_error("from_events: pair " + pair_label(i, j) +
                                   ": interval exceeds [0, T]");
        by_pair[{i, j}].push_back({std::max(r.start, 0.0),
                                   std::min(r.start + r.length, horizon)});
    }

    NetworkData net;
    net.n_nodes = n_nodes;
    net.horizon = horizon;
    net.directed = directed;

    for (auto& [key, intervals] : by_pair) {
        const std::string label = pair_label(key.first, key.second);
        const std::vector<Interval> merged = normalize_intervals(std::move(intervals), tol, label);

        EdgeTimeline tl;
        tl.initial_state = merged.front().start <= tol;
        double cursor = 0.0;
        for (const Interval& iv : merged) {
            if (iv.start > cursor + tol) {
                tl.lengths.push_back(iv.start - cursor);
                cursor = iv.start;
            }
            tl.lengths.push_back(iv.end - cursor);
            cursor = iv.end;
        }
        if (cursor < horizon - tol) tl.lengths.push_back(horizon - cursor);

        tl.validate(horizon, label);
        net.timelines.emplace(key, std::move(tl));
    }
    return net;
}

double pair_log_density(const PairStats& stats, double mu, double nu) {
    if (!(mu > 0.0) || !(nu > 0.0))
        throw std::domain_error("pair_log_density: rates must be positive");
    return static_cast<double>(stats.a_plus) * std::log(mu) +
           static_cast<double>(stats.a_minus) * std::log(nu) - mu * stats.x_plus -
           nu * stats.x_minus;
}

std::vector<std::pair<double, double>> to_intervals(const EdgeTimeline& timeline) {
    std::vector<std::pair<double, double>> out;
    double cursor = 0.0;
    const int w_count = timeline.segment_count();
    for (int w = 1; w <= w_count; ++w) {
        const double x = timeline.lengths[static_cast<std::size_t>(w - 1)];
        if (timeline.state_of(w)) out.emplace_back(cursor, x);
        cursor += x;
    }
    return out;
}

std::int64_t PairStatsTable::total_segments() const {
    std::int64_t total = 0;
    for (const PairStatsEntry& e : entries) total += e.segment_count;
    return total;
}

PairStatsTable build_pair_stats_table(const NetworkData& network) {
    network.validate();
    PairStatsTable table;
    table.n_nodes = network.n_nodes;
    table.horizon = network.horizon;
    table.directed = network.directed;
    const int n = network.n_nodes;
    table.entries.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) /
                          (network.directed ? 1 : 2));

    for (int i = 0; i < n; ++i) {
        const int j_begin = network.directed ? 0 : i + 1;
        for (int j = j_begin; j < n; ++j) {
            if (i == j) continue;
            PairStatsEntry entry;
            entry.i = i;
            entry.j = j;
            if (const EdgeTimeline* tl = network.find(i, j)) {
                entry.stats = compute_pair_stats(*tl, network.horizon);
                entry.segment_count = tl->segment_count();
            } else {
                entry.stats = PairStats{0, 0, 0.0, network.horizon};
                entry.segment_count = 1;
            }
            table.entries.push_back(entry);
        }
    }
    return table;
}

} // namespace ilsbm
