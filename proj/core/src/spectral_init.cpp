#include "ilsbm/spectral_init.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ilsbm {

Eigen::MatrixXd total_interaction_matrix(const NetworkData& network) {
    return total_interaction_matrix(build_pair_stats_table(network));
}

Eigen::MatrixXd total_interaction_matrix(const PairStatsTable& table) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(table.n_nodes, table.n_nodes);
    for (const PairStatsEntry& e : table.entries) {
        m(e.i, e.j) = e.stats.x_plus;
        if (!table.directed) m(e.j, e.i) = e.stats.x_plus;
    }
    return m;
}

Eigen::MatrixXd affinity(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("affinity: matrix must be square");
    const Eigen::Index n = m.rows();
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const double total = m(i, j) + m(j, i);
            if (total > 0.0) s(i, j) = 0.5 * std::log1p(total);
        }
    }
    return s;
}

namespace {

double squared_distance(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
    return (a - b).squaredNorm();
}

struct LloydRun {
    std::vector<int> labels;
    double inertia = 0.0;
    std::vector<double> trace;
};

LloydRun lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centroids) {
    const Eigen::Index n = points.rows();
    const int k = static_cast<int>(centroids.rows());
    constexpr double kMoveTol = 1e-9;
    constexpr int kMaxIter = 200;

    LloydRun run;
    run.labels.assign(static_cast<std::size_t>(n), 0);
    for (int iter = 0; iter < kMaxIter; ++iter) {
        double inertia = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            int best = 0;
            double best_d = squared_distance(points.row(p), centroids.row(0));
            for (int c = 1; c < k; ++c) {
                const double d = squared_distance(points.row(p), centroids.row(c));
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            run.labels[static_cast<std::size_t>(p)] = best;
            inertia += best_d;
        }
        run.inertia = inertia;
        run.trace.push_back(inertia);

        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, points.cols());
        Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
        for (Eigen::Index p = 0; p < n; ++p) {
            next.row(run.labels[static_cast<std::size_t>(p)]) += points.row(p);
            counts(run.labels[static_cast<std::size_t>(p)]) += 1.0;
        }
        double move = 0.0;
        for (int c = 0; c < k; ++c) {
            // Empty clusters keep their old centroid.
            if (counts(c) > 0.0) next.row(c) /= counts(c);
            else next.row(c) = centroids.row(c);
            move = std::max(move, (next.row(c) - centroids.row(c)).norm());
        }
        centroids = std::move(next);
        if (move < kMoveTol) break;
    }
    return run;
}

Eigen::MatrixXd seed_plus_plus(const Eigen::MatrixXd& points, int k, Rng& rng) {
    const Eigen::Index n = points.rows();
    Eigen::MatrixXd centroids(k, points.cols());
    centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.uniform_index(
        static_cast<std::uint64_t>(n))));
    Eigen::VectorXd dist2(n);
    for (Eigen::Index p = 0; p < n; ++p)
        dist2(p) = squared_distance(points.row(p), centroids.row(0));
    for (int c = 1; c < k; ++c) {
        const double total = dist2.sum();
        Eigen::Index pick = 0;
        if (total > 0.0) {
            const double u = rng.uniform() * total;
            double acc = 0.0;
            for (Eigen::Index p = 0; p < n; ++p) {
                acc += dist2(p);
                if (u < acc) {
                    pick = p;
                    break;
                }
                pick = p;
            }
        } else {
            pick = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        }
        centroids.row(c) = points.row(pick);
        for (Eigen::Index p = 0; p < n; ++p)
            dist2(p) = std::min(dist2(p), squared_distance(points.row(p), centroids.row(c)));
    }
    return centroids;
}

} // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, Rng& rng, int restarts) {
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (points.rows() < k) throw std::invalid_argument("kmeans: k exceeds the number of points");
    if (restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");

    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        LloydRun run = lloyd(points, seed_plus_plus(points, k, rng));
        if (run.inertia < best.inertia) {
            best.labels = std::move(run.labels);
            best.inertia = run.inertia;
            best.inertia_trace = std::move(run.trace);
        }
    }
    return best;
}

std::vector<int> spectral_kmeans(const Eigen::MatrixXd& s, int n_groups, Rng& rng) {
    if (s.rows() != s.cols()) throw std::invalid_argument("spectral_kmeans: S must be square");
    const Eigen::Index n = s.rows();
    if (n_groups < 1) throw std::invalid_argument("spectral_kmeans: K must be >= 1");
    if (n_groups > n) throw std::invalid_argument("spectral_kmeans: K exceeds the node count");
    if (n_groups == 1) return std::vector<int>(static_cast<std::size_t>(n), 0);

    constexpr double kDegreeFloor = 1e-12;
    Eigen::VectorXd inv_sqrt_deg(n);
    for (Eigen::Index i = 0; i < n; ++i)
        inv_sqrt_deg(i) = 1.0 / std::sqrt(std::max(s.row(i).sum(), kDegreeFloor));

    Eigen::MatrixXd l_sym = Eigen::MatrixXd::Identity(n, n) -
                            inv_sqrt_deg.asDiagonal() * s * inv_sqrt_deg.asDiagonal();
    // Eigenvalues come out ascending; the K smallest span the embedding.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l_sym);
    if (solver.info() != Eigen::Success)
        throw numerical_error("spectral_kmeans: eigendecomposition failed");
    Eigen::MatrixXd embedding = solver.eigenvectors().leftCols(n_groups);

    for (Eigen::Index i = 0; i < n; ++i) {
        const double norm = embedding.row(i).norm();
        if (norm > 0.0) embedding.row(i) /= norm;
    }
    return kmeans(embedding, n_groups, rng).labels;
}

} // namespace ilsbm
