#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vidlog/embedding_store.hpp"
#include "vidlog/kmeans.hpp"
#include "vidlog/matrix.hpp"
#include "vidlog/segmentation.hpp"

namespace vidlog {

struct ScriptedSegment {
    std::size_t cluster_id = 1;  // ids are contiguous from 1
    std::size_t length = 1;
};

struct SegmentScript {
    std::vector<ScriptedSegment> segments;
    std::size_t dim = 32;
    double noise = 0.05;
    std::uint64_t seed = 0;
    // Seed for the cluster centres; videos sharing it share their activities.
    // Defaults to `seed`.
    std::optional<std::uint64_t> center_seed;
    double min_center_distance = 0.5;  // pairwise cosine distance between centres

    std::string video_id = "synthetic";
    Rational fps{25};
    double base_time = 0.0;

    std::size_t cluster_count() const;
    std::size_t total_frames() const;
    void validate() const;
};

struct GroundTruth {
    std::vector<std::size_t> frame_labels;
};

struct SyntheticVideo {
    FrameEmbeddingSequence sequence;
    GroundTruth truth;
    std::vector<std::vector<double>> centers;  // unit vectors, index = cluster id - 1
};

// Each frame is its segment's centre plus isotropic Gaussian noise,
// renormalised to unit length. Throws CenterSeparationFailure when 1000
// draws in a row fail the separation constraint.
SyntheticVideo synth_sequence(const SegmentScript& script);

enum class LabelMapping {
    OneToOne,   // optimal one-to-one matching of predicted to true labels
    ManyToOne,  // each predicted label maps to its majority true label
};

// Maximum-weight perfect matching on a square profit matrix; result[r] is
// the column assigned to row r.
std::vector<std::size_t> optimal_assignment(const Matrix& profit);

double frame_accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                      LabelMapping mapping = LabelMapping::OneToOne);
double frame_accuracy(std::span<const EventSegment> predicted, const GroundTruth& truth,
                      LabelMapping mapping = LabelMapping::OneToOne);

// Per-frame cluster ids of a segment list.
std::vector<std::size_t> frame_labels(std::span<const EventSegment> segments);

// Mean silhouette over all points, Euclidean; singleton clusters score 0.
// Throws SingleCluster when fewer than two clusters are populated.
double silhouette_score(const Matrix& points, std::span<const std::size_t> labels);
double silhouette_score(const Matrix& points, const ClusterAssignment& assignment);

}  // namespace vidlog
