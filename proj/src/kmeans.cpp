#include "vidlog/kmeans.hpp"

#include <limits>
#include <string>

#include "vidlog/errors.hpp"
#include "vidlog/rng.hpp"

namespace vidlog {
namespace {

struct Run {
    std::vector<std::size_t> labels;  // 0-based while running
    Matrix centroids;
    double wcss = 0.0;
    std::vector<double> trace;
};

Matrix seed_plus_plus(const Matrix& points, std::size_t k, Rng& rng) {
    const std::size_t n = points.rows();
    Matrix centroids(k, points.cols());
    std::size_t first = rng.below(n);
    std::copy(points.row(first).begin(), points.row(first).end(), centroids.row(0).begin());

    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], squared_distance(points.row(i), centroids.row(c - 1)));
            total += nearest[i];
        }
        std::size_t pick = n - 1;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += nearest[i];
                if (target < acc && nearest[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.below(n);
        }
        std::copy(points.row(pick).begin(), points.row(pick).end(), centroids.row(c).begin());
    }
    return centroids;
}

double run_wcss(const Matrix& points, const std::vector<std::size_t>& labels, const Matrix& centroids) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) s += squared_distance(points.row(i), centroids.row(labels[i]));
    return s;
}

// Moves the point farthest from its centroid into each empty cluster. Only
// points from clusters with more than one member are eligible.
void repair_empty_clusters(const Matrix& points, std::vector<std::size_t>& labels, Matrix& centroids) {
    const std::size_t k = centroids.rows();
    std::vector<std::size_t> counts(k, 0);
    for (auto l : labels) ++counts[l];
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] != 0) continue;
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.rows(); ++i) {
            if (counts[labels[i]] < 2) continue;
            const double d = squared_distance(points.row(i), centroids.row(labels[i]));
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        --counts[labels[far]];
        labels[far] = c;
        ++counts[c];
        std::copy(points.row(far).begin(), points.row(far).end(), centroids.row(c).begin());
    }
}

void update_centroids(const Matrix& points, const std::vector<std::size_t>& labels, Matrix& centroids) {
    const std::size_t k = centroids.rows();
    std::vector<std::size_t> counts(k, 0);
    Matrix sums(k, points.cols());
    for (std::size_t i = 0; i < points.rows(); ++i) {
        ++counts[labels[i]];
        auto dst = sums.row(labels[i]);
        const auto src = points.row(i);
        for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) continue;
        auto dst = centroids.row(c);
        const auto src = sums.row(c);
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = src[j] / static_cast<double>(counts[c]);
    }
}

Run lloyd(const Matrix& points, std::size_t k, std::size_t max_iterations, Rng& rng) {
    const std::size_t n = points.rows();
    Run run;
    run.centroids = seed_plus_plus(points, k, rng);
    run.labels.assign(n, std::numeric_limits<std::size_t>::max());

    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t current = run.labels[i];
            std::size_t best = current;
            double best_d = current < k ? squared_distance(points.row(i), run.centroids.row(current))
                                        : std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = squared_distance(points.row(i), run.centroids.row(c));
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (best != current) {
                run.labels[i] = best;
                changed = true;
            }
        }
        if (!changed) break;
        repair_empty_clusters(points, run.labels, run.centroids);
        update_centroids(points, run.labels, run.centroids);
        run.trace.push_back(run_wcss(points, run.labels, run.centroids));
    }
    run.wcss = run_wcss(points, run.labels, run.centroids);
    return run;
}

}  // namespace

double within_cluster_ss(const Matrix& points, std::span<const std::size_t> labels, const Matrix& centroids) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i)
        s += squared_distance(points.row(i), centroids.row(labels[i] - 1));
    return s;
}

KMeansReport kmeans_cluster_report(const Matrix& points, const KMeansOptions& options) {
    const std::size_t n = points.rows();
    if (options.k < 1 || options.k > n)
        throw InvalidK("k = " + std::to_string(options.k) + " must lie in [1, " + std::to_string(n) + "]");
    if (options.restarts < 1) throw ConfigError("restarts must be at least 1");

    KMeansReport report;
    Run best;
    bool have_best = false;
    for (std::size_t r = 0; r < options.restarts; ++r) {
        Rng rng(options.seed, r);
        Run run = lloyd(points, options.k, options.max_iterations, rng);
        report.wcss_traces.push_back(run.trace);
        if (!have_best || run.wcss < best.wcss) {
            best = std::move(run);
            report.best_restart = r;
            have_best = true;
        }
    }

    ClusterAssignment& out = report.best;
    out.k = options.k;
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.labels[i] = best.labels[i] + 1;
    out.centroids = std::move(best.centroids);
    out.wcss = best.wcss;
    out.wcss_trace = std::move(best.trace);
    return report;
}

ClusterAssignment kmeans_cluster(const Matrix& points, std::size_t k, std::uint64_t seed, std::size_t restarts) {
    return kmeans_cluster_report(points, KMeansOptions{k, seed, restarts, 300}).best;
}

}  // namespace vidlog
