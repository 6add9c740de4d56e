#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vidlog/matrix.hpp"

namespace vidlog {

struct ClusterAssignment {
    std::size_t k = 0;
    std::vector<std::size_t> labels;  // cluster id per point, in 1..k
    Matrix centroids;                 // k x dim, row c-1 is cluster c
    double wcss = 0.0;
    // WCSS after every Lloyd iteration of the winning run.
    std::vector<double> wcss_trace;
};

struct KMeansOptions {
    std::size_t k = 7;
    std::uint64_t seed = 0;
    std::size_t restarts = 10;
    std::size_t max_iterations = 300;
};

struct KMeansReport {
    ClusterAssignment best;
    std::size_t best_restart = 0;
    std::vector<std::vector<double>> wcss_traces;  // one per restart
};

// Within-cluster sum of squares of a labeling (labels in 1..k) against the given centroids.
double within_cluster_ss(const Matrix& points, std::span<const std::size_t> labels, const Matrix& centroids);

// Lloyd's algorithm with k-means++ seeding. Runs `restarts` independently
// seeded attempts and keeps the lowest WCSS, ties to the lowest restart index.
// Throws InvalidK unless 1 <= k <= points.rows().
ClusterAssignment kmeans_cluster(const Matrix& points, std::size_t k, std::uint64_t seed, std::size_t restarts = 10);
KMeansReport kmeans_cluster_report(const Matrix& points, const KMeansOptions& options);

}  // namespace vidlog
