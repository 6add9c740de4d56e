#include "vidlog/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "vidlog/errors.hpp"
#include "vidlog/rng.hpp"

namespace vidlog {

std::size_t SegmentScript::cluster_count() const {
    std::size_t k = 0;
    for (const auto& s : segments) k = std::max(k, s.cluster_id);
    return k;
}

std::size_t SegmentScript::total_frames() const {
    std::size_t t = 0;
    for (const auto& s : segments) t += s.length;
    return t;
}

void SegmentScript::validate() const {
    if (segments.empty()) throw ConfigError("segment script is empty");
    if (dim < 1) throw ConfigError("script dimension must be at least 1");
    if (!(noise >= 0.0)) throw ConfigError("noise must be non-negative");
    std::set<std::size_t> ids;
    for (const auto& s : segments) {
        if (s.length < 1) throw ConfigError("scripted segment lengths must be at least 1");
        if (s.cluster_id < 1) throw ConfigError("cluster ids start at 1");
        ids.insert(s.cluster_id);
    }
    if (ids.size() != cluster_count()) throw ConfigError("cluster ids must be contiguous from 1");
}

SyntheticVideo synth_sequence(const SegmentScript& script) {
    script.validate();
    const std::size_t k = script.cluster_count();
    const std::size_t d = script.dim;

    SyntheticVideo out;
    Rng center_rng(script.center_seed.value_or(script.seed), 0);
    for (std::size_t c = 0; c < k; ++c) {
        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
            std::vector<double> v(d);
            double norm = 0.0;
            for (double& x : v) {
                x = center_rng.normal();
                norm += x * x;
            }
            norm = std::sqrt(norm);
            if (norm == 0.0) continue;
            for (double& x : v) x /= norm;
            placed = std::all_of(out.centers.begin(), out.centers.end(), [&](const std::vector<double>& u) {
                double dot = 0.0;
                for (std::size_t i = 0; i < d; ++i) dot += u[i] * v[i];
                return 1.0 - dot >= script.min_center_distance;
            });
            if (placed) out.centers.push_back(std::move(v));
        }
        if (!placed)
            throw CenterSeparationFailure("could not place " + std::to_string(k) + " centres at cosine distance " +
                                          std::to_string(script.min_center_distance) + " in dimension " +
                                          std::to_string(d));
    }

    auto& seq = out.sequence;
    seq.video_id = script.video_id;
    seq.fps = script.fps;
    seq.base_time = script.base_time;
    seq.frames = script.total_frames();
    seq.dim = d;
    seq.data.reserve(seq.frames * d);

    Rng noise_rng(script.seed, 1);
    std::vector<double> frame(d);
    for (const auto& s : script.segments) {
        const auto& center = out.centers[s.cluster_id - 1];
        for (std::size_t f = 0; f < s.length; ++f) {
            out.truth.frame_labels.push_back(s.cluster_id);
            if (script.noise == 0.0) {
                for (double x : center) seq.data.push_back(static_cast<float>(x));
                continue;
            }
            double norm = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                frame[i] = center[i] + script.noise * noise_rng.normal();
                norm += frame[i] * frame[i];
            }
            norm = std::sqrt(norm);
            for (double x : frame) seq.data.push_back(static_cast<float>(x / norm));
        }
    }
    return out;
}

std::vector<std::size_t> optimal_assignment(const Matrix& profit) {
    // Hungarian method with potentials on cost = -profit, 1-based internally.
    const std::size_t n = profit.rows();
    if (profit.cols() != n) throw DimensionMismatch("assignment matrix must be square");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = -profit(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

double frame_accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                      LabelMapping mapping) {
    if (predicted.size() != truth.size())
        throw LengthMismatch("prediction covers " + std::to_string(predicted.size()) + " frames, truth " +
                             std::to_string(truth.size()));
    if (truth.empty()) throw EmptyInput("no frames to score");

    std::map<std::size_t, std::size_t> pred_index, truth_index;
    for (auto l : predicted) pred_index.emplace(l, pred_index.size());
    for (auto l : truth) truth_index.emplace(l, truth_index.size());
    const std::size_t n = std::max(pred_index.size(), truth_index.size());

    Matrix overlap(n, n);  // zero rows/columns pad it square
    for (std::size_t f = 0; f < truth.size(); ++f) overlap(pred_index[predicted[f]], truth_index[truth[f]]) += 1.0;

    double matched = 0.0;
    if (mapping == LabelMapping::OneToOne) {
        const auto assignment = optimal_assignment(overlap);
        for (std::size_t r = 0; r < n; ++r) matched += overlap(r, assignment[r]);
    } else {
        for (std::size_t r = 0; r < n; ++r) {
            const auto row = overlap.row(r);
            matched += *std::max_element(row.begin(), row.end());
        }
    }
    return matched / static_cast<double>(truth.size());
}

std::vector<std::size_t> frame_labels(std::span<const EventSegment> segments) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (segments[i].start_frame != out.size())
            throw InputError("segments do not partition the frame range");
        out.insert(out.end(), segments[i].length(), segments[i].cluster_id);
    }
    return out;
}

double frame_accuracy(std::span<const EventSegment> predicted, const GroundTruth& truth, LabelMapping mapping) {
    const auto labels = frame_labels(predicted);
    return frame_accuracy(std::span<const std::size_t>(labels), truth.frame_labels, mapping);
}

double silhouette_score(const Matrix& points, std::span<const std::size_t> labels) {
    const std::size_t n = points.rows();
    if (labels.size() != n) throw LengthMismatch("one label per point required");
    std::map<std::size_t, std::size_t> index;
    for (auto l : labels) index.emplace(l, index.size());
    const std::size_t k = index.size();
    if (k < 2) throw SingleCluster("silhouette needs at least two populated clusters");

    std::vector<std::size_t> cluster(n), sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        cluster[i] = index[labels[i]];
        ++sizes[cluster[i]];
    }

    double total = 0.0;
    std::vector<double> sums(k);
    for (std::size_t i = 0; i < n; ++i) {
        if (sizes[cluster[i]] == 1) continue;  // singleton scores 0
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sums[cluster[j]] += std::sqrt(squared_distance(points.row(i), points.row(j)));
        }
        const double a = sums[cluster[i]] / static_cast<double>(sizes[cluster[i]] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c)
            if (c != cluster[i]) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

double silhouette_score(const Matrix& points, const ClusterAssignment& assignment) {
    if (assignment.k < 2) throw SingleCluster("silhouette is undefined for k = 1");
    return silhouette_score(points, std::span<const std::size_t>(assignment.labels));
}

}  // namespace vidlog
