#include "vidlog/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "vidlog/errors.hpp"

namespace vidlog {

std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> out(logits.size());
    if (logits.empty()) return out;
    const double top = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - top);
        total += out[i];
    }
    for (double& v : out) v /= total;
    return out;
}

DistanceMatrix cosine_distance_matrix(const FrameEmbeddingSequence& seq) {
    Matrix z(seq.frames, seq.dim);
    for (std::size_t i = 0; i < seq.frames; ++i) {
        const auto f = seq.frame(i);
        std::copy(f.begin(), f.end(), z.row(i).begin());
    }
    return cosine_distance_matrix(z);
}

DistanceMatrix cosine_distance_matrix(const Matrix& embeddings) {
    const std::size_t n = embeddings.rows();
    const std::size_t d = embeddings.cols();

    Matrix z(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto f = embeddings.row(i);
        double norm = 0.0;
        for (std::size_t k = 0; k < d; ++k) norm += f[k] * f[k];
        norm = std::sqrt(norm);
        if (norm == 0.0) throw ZeroNormFrame(i);
        for (std::size_t k = 0; k < d; ++k) z(i, k) = f[k] / norm;
    }

    DistanceMatrix out{Matrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto zi = z.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto zj = z.row(j);
            double dot = 0.0;
            for (std::size_t k = 0; k < d; ++k) dot += zi[k] * zj[k];
            const double dist = std::clamp(1.0 - dot, 0.0, 2.0);
            out.values(i, j) = dist;
            out.values(j, i) = dist;
        }
    }
    return out;
}

ContextualizedFrameMatrix contextualize(const DistanceMatrix& distances, RowNormalization normalization) {
    const std::size_t n = distances.size();
    Matrix m(n + 1, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = distances.values(i, j);
    for (std::size_t j = 0; j < n; ++j) m(n, j) = static_cast<double>(j + 1);

    for (std::size_t i = 0; i <= n; ++i) {
        auto row = m.row(i);
        double scale = 0.0;
        for (double v : row) {
            if (normalization == RowNormalization::MaxAbs)
                scale = std::max(scale, std::abs(v));
            else
                scale += std::abs(v);
        }
        // 0/0 is taken as 0: an all-zero row stays zero and softmaxes to uniform.
        if (scale > 0.0)
            for (double& v : row) v /= scale;
        const auto probs = softmax(row);
        std::copy(probs.begin(), probs.end(), row.begin());
    }
    return ContextualizedFrameMatrix{std::move(m)};
}

}  // namespace vidlog
