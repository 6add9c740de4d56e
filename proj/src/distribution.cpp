#include "vidlog/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vidlog/errors.hpp"

namespace vidlog {

std::vector<std::size_t> LabelDistribution::ranking() const {
    std::vector<std::size_t> order(probabilities.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
        if (probabilities[a] != probabilities[b]) return probabilities[a] > probabilities[b];
        return labels[a] < labels[b];
    });
    return order;
}

std::size_t LabelDistribution::argmax() const {
    if (probabilities.empty()) throw EmptyInput("empty label distribution");
    std::size_t best = 0;
    for (std::size_t i = 1; i < probabilities.size(); ++i) {
        if (probabilities[i] > probabilities[best] ||
            (probabilities[i] == probabilities[best] && labels[i] < labels[best]))
            best = i;
    }
    return best;
}

double LabelDistribution::probability_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return probabilities[i];
    return 0.0;
}

void LabelDistribution::validate(double tolerance) const {
    if (labels.size() != probabilities.size()) throw LengthMismatch("labels and probabilities differ in length");
    if (probabilities.empty()) throw EmptyInput("empty label distribution");
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("probability out of range");
        total += p;
    }
    if (std::abs(total - 1.0) > tolerance) throw InputError("probabilities sum to " + std::to_string(total));
}

LabelDistribution truncate_topk(const LabelDistribution& dist, std::size_t k) {
    if (k == 0) throw ConfigError("top-k truncation needs k >= 1");
    if (k >= dist.size()) return dist;
    auto order = dist.ranking();
    order.resize(k);
    std::sort(order.begin(), order.end());  // retained labels keep their original order

    LabelDistribution out;
    double mass = 0.0;
    for (auto i : order) mass += dist.probabilities[i];
    for (auto i : order) {
        out.labels.push_back(dist.labels[i]);
        out.probabilities.push_back(mass > 0.0 ? dist.probabilities[i] / mass : 1.0 / static_cast<double>(k));
    }
    return out;
}

}  // namespace vidlog
