#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vidlog/distribution.hpp"
#include "vidlog/embedding_store.hpp"
#include "vidlog/kmeans.hpp"
#include "vidlog/rational.hpp"
#include "vidlog/similarity.hpp"

namespace vidlog {

// Half-open frame interval [start_frame, end_frame) of one video.
struct EventSegment {
    std::size_t start_frame = 0;
    std::size_t end_frame = 0;
    std::size_t cluster_id = 0;
    std::vector<double> centroid;
    std::optional<LabelDistribution> label_distribution;

    std::size_t length() const noexcept { return end_frame - start_frame; }
};

// Which centroid the merge step compares and carries.
enum class MergeCentroid {
    EventMean,        // mean of the event's own frame vectors, re-weighted on merge
    ClusterCentroid,  // k-means centroid of the event's cluster
};

// Maximal runs of equal cluster id, in chronological order.
std::vector<EventSegment> atomic_events(const ClusterAssignment& assignment, const Matrix& points,
                                        MergeCentroid mode = MergeCentroid::EventMean);

// l_avg = mean(lengths), l_min = total / floor(total / l_avg), exactly.
Rational min_event_length(std::size_t total_frames, std::span<const std::size_t> lengths);

struct MergeStats {
    std::size_t passes = 0;
    std::size_t merges = 0;
};

// Greedy merging of events shorter than l_min, repeated in chronological
// passes until every event reaches l_min or a single event remains.
//
// A short event at either end of the video joins its only neighbour. A
// flanked event whose neighbours share a cluster id fuses with both; otherwise
// it joins the neighbour with the nearer centroid (Euclidean), preferring the
// preceding one on ties. The merged event takes the absorbing neighbour's
// cluster id.
std::vector<EventSegment> merge_events(std::vector<EventSegment> events, const Rational& l_min,
                                       MergeCentroid mode = MergeCentroid::EventMean,
                                       MergeStats* stats = nullptr);

struct SegmentOptions {
    std::size_t k = 7;
    std::uint64_t seed = 0;
    std::size_t restarts = 10;
    RowNormalization normalization = RowNormalization::MaxAbs;
    MergeCentroid merge_centroid = MergeCentroid::EventMean;
};

struct SegmentationResult {
    Matrix points;  // contextualized frame vectors, T x (T+1)
    ClusterAssignment clusters;
    std::vector<EventSegment> atomic;
    Rational l_min;
    std::vector<EventSegment> segments;
};

SegmentationResult segment_video_detailed(const FrameEmbeddingSequence& seq, const SegmentOptions& options);
std::vector<EventSegment> segment_video(const FrameEmbeddingSequence& seq, std::size_t k, std::uint64_t seed);

}  // namespace vidlog
