#include "vidlog/segmentation.hpp"

#include <numeric>
#include <string>

#include "vidlog/errors.hpp"

namespace vidlog {
namespace {

std::vector<double> weighted_mean(const EventSegment& a, const EventSegment& b) {
    const double wa = static_cast<double>(a.length());
    const double wb = static_cast<double>(b.length());
    std::vector<double> out(a.centroid.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (a.centroid[i] * wa + b.centroid[i] * wb) / (wa + wb);
    return out;
}

// Folds `other` into `absorber`, which keeps its cluster id.
void absorb(EventSegment& absorber, const EventSegment& other, MergeCentroid mode) {
    if (mode == MergeCentroid::EventMean) absorber.centroid = weighted_mean(absorber, other);
    absorber.start_frame = std::min(absorber.start_frame, other.start_frame);
    absorber.end_frame = std::max(absorber.end_frame, other.end_frame);
}

bool shorter_than(const EventSegment& e, const Rational& l_min) {
    return Rational(static_cast<std::int64_t>(e.length())) < l_min;
}

}  // namespace

std::vector<EventSegment> atomic_events(const ClusterAssignment& assignment, const Matrix& points,
                                        MergeCentroid mode) {
    const auto& labels = assignment.labels;
    std::vector<EventSegment> out;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= labels.size(); ++i) {
        if (i < labels.size() && labels[i] == labels[start]) continue;
        EventSegment e;
        e.start_frame = start;
        e.end_frame = i;
        e.cluster_id = labels[start];
        if (mode == MergeCentroid::ClusterCentroid) {
            const auto c = assignment.centroids.row(e.cluster_id - 1);
            e.centroid.assign(c.begin(), c.end());
        } else {
            e.centroid.assign(points.cols(), 0.0);
            for (std::size_t f = start; f < i; ++f) {
                const auto p = points.row(f);
                for (std::size_t j = 0; j < p.size(); ++j) e.centroid[j] += p[j];
            }
            for (double& v : e.centroid) v /= static_cast<double>(i - start);
        }
        out.push_back(std::move(e));
        start = i;
    }
    return out;
}

Rational min_event_length(std::size_t total_frames, std::span<const std::size_t> lengths) {
    if (lengths.empty()) throw EmptyInput("no event lengths");
    const std::size_t sum = std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
    if (sum != total_frames) throw LengthMismatch("event lengths do not add up to the frame count");
    const Rational total(static_cast<std::int64_t>(total_frames));
    const Rational l_avg(static_cast<std::int64_t>(sum), static_cast<std::int64_t>(lengths.size()));
    return total / Rational((total / l_avg).floor());
}

std::vector<EventSegment> merge_events(std::vector<EventSegment> events, const Rational& l_min, MergeCentroid mode,
                                       MergeStats* stats) {
    MergeStats local;
    while (events.size() > 1) {
        ++local.passes;
        bool merged = false;
        std::size_t i = 0;
        while (i < events.size() && events.size() > 1) {
            if (!shorter_than(events[i], l_min)) {
                ++i;
                continue;
            }
            merged = true;
            ++local.merges;
            const auto at = [&](std::size_t idx) { return events.begin() + static_cast<std::ptrdiff_t>(idx); };
            if (i == 0) {
                absorb(events[1], events[0], mode);
                events.erase(at(0));
            } else if (i + 1 == events.size()) {
                absorb(events[i - 1], events[i], mode);
                events.erase(at(i));
            } else if (events[i - 1].cluster_id == events[i + 1].cluster_id) {
                absorb(events[i - 1], events[i], mode);
                absorb(events[i - 1], events[i + 1], mode);
                events.erase(at(i), at(i + 2));
            } else {
                const double d_prev = squared_distance(events[i].centroid, events[i - 1].centroid);
                const double d_next = squared_distance(events[i].centroid, events[i + 1].centroid);
                if (d_prev <= d_next) {
                    absorb(events[i - 1], events[i], mode);
                } else {
                    absorb(events[i + 1], events[i], mode);
                }
                events.erase(at(i));
            }
        }
        if (!merged) break;
    }
    if (stats) *stats = local;
    return events;
}

SegmentationResult segment_video_detailed(const FrameEmbeddingSequence& seq, const SegmentOptions& options) {
    seq.validate();
    if (options.k < 1 || options.k > seq.frames)
        throw InvalidK("k = " + std::to_string(options.k) + " exceeds the " + std::to_string(seq.frames) +
                       " frames of '" + seq.video_id + "'");

    SegmentationResult r;
    r.points = contextualize(cosine_distance_matrix(seq), options.normalization).frame_points();
    r.clusters = kmeans_cluster(r.points, options.k, options.seed, options.restarts);
    r.atomic = atomic_events(r.clusters, r.points, options.merge_centroid);

    std::vector<std::size_t> lengths;
    lengths.reserve(r.atomic.size());
    for (const auto& e : r.atomic) lengths.push_back(e.length());
    r.l_min = min_event_length(seq.frames, lengths);
    r.segments = merge_events(r.atomic, r.l_min, options.merge_centroid);
    return r;
}

std::vector<EventSegment> segment_video(const FrameEmbeddingSequence& seq, std::size_t k, std::uint64_t seed) {
    SegmentOptions options;
    options.k = k;
    options.seed = seed;
    return segment_video_detailed(seq, options).segments;
}

}  // namespace vidlog
