#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace vidlog {

// Probability vector over an ordered list of activity labels.
struct LabelDistribution {
    std::vector<std::string> labels;
    std::vector<double> probabilities;

    std::size_t size() const noexcept { return probabilities.size(); }

    // Index of the most likely label; ties go to the label that sorts first.
    std::size_t argmax() const;
    const std::string& most_likely() const { return labels.at(argmax()); }

    // Indices of labels by descending probability, ties by ascending label.
    std::vector<std::size_t> ranking() const;

    // Probability of `label`, 0 if absent.
    double probability_of(const std::string& label) const;

    // Throws InputError unless the entries are >= 0 and sum to 1 within `tolerance`.
    void validate(double tolerance = 1e-9) const;

    friend bool operator==(const LabelDistribution&, const LabelDistribution&) = default;
};

// Keeps the k most likely labels (ties by ascending label) and rescales them
// by the retained mass. k larger than the label count keeps everything.
LabelDistribution truncate_topk(const LabelDistribution& dist, std::size_t k);

}  // namespace vidlog
