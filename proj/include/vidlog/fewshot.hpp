#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vidlog/distribution.hpp"
#include "vidlog/matrix.hpp"

namespace vidlog {

inline constexpr std::size_t kClipLength = 16;

enum class ClipMode { NonOverlapping, Overlapping };

ClipMode parse_clip_mode(const std::string& text);
std::string to_string(ClipMode mode);

// 16 frame offsets relative to the start of a segment.
struct ClipWindow {
    std::array<std::size_t, kClipLength> frames{};
    friend bool operator==(const ClipWindow&, const ClipWindow&) = default;
};

// Non-overlapping: up to `count` disjoint windows, left-aligned; when the
// segment holds more than `count` windows they are spread evenly. Overlapping:
// `count` windows drawn uniformly with replacement from every 16-frame window.
// Segments shorter than 16 frames are looped cyclically into one window
// (repeated `count` times in overlapping mode).
std::vector<ClipWindow> sample_clips(std::size_t segment_length, ClipMode mode, std::size_t count,
                                     std::uint64_t seed);

// Linear softmax head: p(a | z) = softmax(W^T z), W is d x m.
class LinearHead {
public:
    LinearHead(std::size_t dim, std::vector<std::string> labels);
    LinearHead(std::vector<std::string> labels, Matrix weights);

    std::size_t dim() const noexcept { return weights_.rows(); }
    std::size_t classes() const noexcept { return weights_.cols(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const Matrix& weights() const noexcept { return weights_; }
    Matrix& weights() noexcept { return weights_; }

    std::size_t label_index(const std::string& label) const;  // throws UnknownLabel
    std::vector<double> logits(std::span<const double> z) const;

private:
    std::vector<std::string> labels_;
    Matrix weights_;
};

struct LabeledClip {
    std::vector<double> embedding;
    std::string label;
};

struct TrainingResult {
    LinearHead head;
    // loss_trace[0] is the loss before training, loss_trace[e] after epoch e.
    std::vector<double> loss_trace;
};

// Mean cross-entropy of the head over `batch` and its gradient w.r.t. W.
double cross_entropy(const LinearHead& head, std::span<const LabeledClip> batch);
Matrix cross_entropy_gradient(const LinearHead& head, std::span<const LabeledClip> batch);

// Zero-initialised W, full-batch gradient descent on mean cross-entropy.
TrainingResult train_head(std::span<const LabeledClip> clips, std::vector<std::string> labels, double lr,
                          std::size_t epochs);

LabelDistribution predict_clip(const LinearHead& head, std::span<const double> z);

// How clip predictions combine into one segment distribution.
enum class Aggregation {
    Mean,  // arithmetic mean of the clip distributions
    Vote,  // share of clips whose most likely label is each label
    Max,   // per-label maximum over clips
};

Aggregation parse_aggregation(const std::string& text);
std::string to_string(Aggregation mode);

// Combines clip distributions over one label set; the result is renormalised.
LabelDistribution aggregate_segment(std::span<const LabelDistribution> clip_distributions,
                                    Aggregation mode = Aggregation::Mean);

// Fraction of items whose truth is among the k most likely labels.
double top_k_accuracy(std::span<const LabelDistribution> predictions, std::span<const std::string> truths,
                      std::size_t k);

std::string head_to_json(const LinearHead& head);
LinearHead head_from_json(const std::string& text);

}  // namespace vidlog
