#include "vidlog/fewshot.hpp"

#include <algorithm>
#include <cmath>
#include "json.hpp"

#include "vidlog/errors.hpp"
#include "vidlog/rng.hpp"
#include "vidlog/similarity.hpp"

namespace vidlog {

ClipMode parse_clip_mode(const std::string& text) {
    if (text == "non-overlapping") return ClipMode::NonOverlapping;
    if (text == "overlapping") return ClipMode::Overlapping;
    throw ConfigError("unknown clip mode '" + text + "'");
}

std::string to_string(ClipMode mode) {
    return mode == ClipMode::NonOverlapping ? "non-overlapping" : "overlapping";
}

std::vector<ClipWindow> sample_clips(std::size_t segment_length, ClipMode mode, std::size_t count,
                                     std::uint64_t seed) {
    if (segment_length < 1) throw EmptyInput("cannot sample clips from an empty segment");
    if (count < 1) throw ConfigError("clip count must be at least 1");

    const auto window_at = [segment_length](std::size_t start) {
        ClipWindow w;
        for (std::size_t i = 0; i < kClipLength; ++i) w.frames[i] = (start + i) % segment_length;
        return w;
    };

    std::vector<ClipWindow> out;
    if (segment_length < kClipLength) {
        out.assign(mode == ClipMode::Overlapping ? count : 1, window_at(0));
        return out;
    }

    if (mode == ClipMode::NonOverlapping) {
        const std::size_t available = segment_length / kClipLength;
        if (available <= count) {
            for (std::size_t i = 0; i < available; ++i) out.push_back(window_at(i * kClipLength));
        } else {
            // stride = length / count >= 16, so windows stay disjoint
            for (std::size_t i = 0; i < count; ++i) out.push_back(window_at(i * segment_length / count));
        }
        return out;
    }

    Rng rng(seed);
    const std::size_t starts = segment_length - kClipLength + 1;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(window_at(rng.below(starts)));
    return out;
}

LinearHead::LinearHead(std::size_t dim, std::vector<std::string> labels)
    : LinearHead(labels, Matrix(dim, labels.size())) {}

LinearHead::LinearHead(std::vector<std::string> labels, Matrix weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
    if (labels_.size() < 2) throw ConfigError("a classification head needs at least two labels");
    if (weights_.cols() != labels_.size()) throw DimensionMismatch("weight columns do not match label count");
    if (weights_.rows() < 1) throw DimensionMismatch("embedding dimension must be at least 1");
    auto sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ConfigError("duplicate label in classification head");
    for (double w : weights_.data())
        if (!std::isfinite(w)) throw NonFiniteValue("head weight is not finite");
}

std::size_t LinearHead::label_index(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw UnknownLabel("label '" + label + "' is not known to the head");
    return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<double> LinearHead::logits(std::span<const double> z) const {
    if (z.size() != dim())
        throw DimensionMismatch("embedding has dimension " + std::to_string(z.size()) + ", head expects " +
                                std::to_string(dim()));
    std::vector<double> out(classes(), 0.0);
    for (std::size_t i = 0; i < dim(); ++i) {
        const auto w = weights_.row(i);
        for (std::size_t a = 0; a < out.size(); ++a) out[a] += w[a] * z[i];
    }
    return out;
}

double cross_entropy(const LinearHead& head, std::span<const LabeledClip> batch) {
    if (batch.empty()) throw EmptyInput("empty training batch");
    double total = 0.0;
    for (const auto& clip : batch) {
        const auto logits = head.logits(clip.embedding);
        const double top = *std::max_element(logits.begin(), logits.end());
        double z = 0.0;
        for (double l : logits) z += std::exp(l - top);
        total += top + std::log(z) - logits[head.label_index(clip.label)];
    }
    return total / static_cast<double>(batch.size());
}

Matrix cross_entropy_gradient(const LinearHead& head, std::span<const LabeledClip> batch) {
    if (batch.empty()) throw EmptyInput("empty training batch");
    Matrix grad(head.dim(), head.classes());
    const double scale = 1.0 / static_cast<double>(batch.size());
    for (const auto& clip : batch) {
        auto residual = softmax(head.logits(clip.embedding));
        residual[head.label_index(clip.label)] -= 1.0;
        for (std::size_t i = 0; i < head.dim(); ++i) {
            auto g = grad.row(i);
            const double zi = clip.embedding[i] * scale;
            for (std::size_t a = 0; a < residual.size(); ++a) g[a] += zi * residual[a];
        }
    }
    return grad;
}

TrainingResult train_head(std::span<const LabeledClip> clips, std::vector<std::string> labels, double lr,
                          std::size_t epochs) {
    if (clips.empty()) throw EmptyInput("no training clips");
    if (!(lr > 0.0)) throw ConfigError("learning rate must be positive");
    const std::size_t dim = clips.front().embedding.size();
    for (const auto& c : clips)
        if (c.embedding.size() != dim) throw DimensionMismatch("training clips differ in dimension");

    TrainingResult result{LinearHead(dim, std::move(labels)), {}};
    for (const auto& c : clips) result.head.label_index(c.label);

    result.loss_trace.push_back(cross_entropy(result.head, clips));
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        const Matrix grad = cross_entropy_gradient(result.head, clips);
        auto w = result.head.weights().data();
        const auto g = grad.data();
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr * g[i];
        result.loss_trace.push_back(cross_entropy(result.head, clips));
    }
    return result;
}

LabelDistribution predict_clip(const LinearHead& head, std::span<const double> z) {
    return LabelDistribution{head.labels(), softmax(head.logits(z))};
}

Aggregation parse_aggregation(const std::string& text) {
    if (text == "mean") return Aggregation::Mean;
    if (text == "vote") return Aggregation::Vote;
    if (text == "max") return Aggregation::Max;
    throw ConfigError("unknown aggregation '" + text + "'");
}

std::string to_string(Aggregation mode) {
    switch (mode) {
        case Aggregation::Mean: return "mean";
        case Aggregation::Vote: return "vote";
        case Aggregation::Max: return "max";
    }
    return "mean";
}

LabelDistribution aggregate_segment(std::span<const LabelDistribution> clip_distributions, Aggregation mode) {
    if (clip_distributions.empty()) throw EmptyInput("no clip predictions to aggregate");
    LabelDistribution out{clip_distributions.front().labels,
                          std::vector<double>(clip_distributions.front().size(), 0.0)};
    for (const auto& d : clip_distributions) {
        if (d.labels != out.labels) throw DimensionMismatch("clip predictions use different label sets");
        switch (mode) {
            case Aggregation::Mean:
                for (std::size_t a = 0; a < d.size(); ++a) out.probabilities[a] += d.probabilities[a];
                break;
            case Aggregation::Vote:
                out.probabilities[d.argmax()] += 1.0;
                break;
            case Aggregation::Max:
                for (std::size_t a = 0; a < d.size(); ++a)
                    out.probabilities[a] = std::max(out.probabilities[a], d.probabilities[a]);
                break;
        }
    }
    double total = 0.0;
    for (double& p : out.probabilities) {
        if (mode != Aggregation::Max) p /= static_cast<double>(clip_distributions.size());
        total += p;
    }
    for (double& p : out.probabilities) p /= total;
    return out;
}

double top_k_accuracy(std::span<const LabelDistribution> predictions, std::span<const std::string> truths,
                      std::size_t k) {
    if (predictions.size() != truths.size())
        throw LengthMismatch("predictions and truths differ in length");
    if (k < 1) throw ConfigError("top-k needs k >= 1");
    if (predictions.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const auto& p = predictions[i];
        const auto order = p.ranking();
        const std::size_t keep = std::min(k, order.size());
        for (std::size_t r = 0; r < keep; ++r) {
            if (p.labels[order[r]] == truths[i]) {
                ++hits;
                break;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

std::string head_to_json(const LinearHead& head) {
    nlohmann::ordered_json j;
    j["d"] = head.dim();
    j["labels"] = head.labels();
    j["weights"] = std::vector<double>(head.weights().data().begin(), head.weights().data().end());
    j["label_order_note"] = "weights are row-major d x m; column a belongs to labels[a]";
    return j.dump(2) + "\n";
}

LinearHead head_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        const auto dim = j.at("d").get<std::size_t>();
        auto labels = j.at("labels").get<std::vector<std::string>>();
        const auto weights = j.at("weights").get<std::vector<double>>();
        if (weights.size() != dim * labels.size())
            throw DimensionMismatch("head weights do not hold d x m values");
        Matrix w(dim, labels.size());
        std::copy(weights.begin(), weights.end(), w.data().begin());
        return LinearHead(std::move(labels), std::move(w));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed head file: ") + e.what());
    }
}

}  // namespace vidlog
