#pragma once

#include <cstddef>
#include <vector>

#include "vidlog/embedding_store.hpp"
#include "vidlog/matrix.hpp"

namespace vidlog {

// Pairwise cosine distances d_ij = 1 - cos(z_i, z_j), T x T, entries in [0, 2].
struct DistanceMatrix {
    Matrix values;
    std::size_t size() const noexcept { return values.rows(); }
};

// (T+1) x T matrix: the T distance rows plus the appended frame-index row,
// each row scaled and then softmaxed. Column j is the contextualized
// representation of frame j.
struct ContextualizedFrameMatrix {
    Matrix rows;
    std::size_t frames() const noexcept { return rows.cols(); }
    std::size_t features() const noexcept { return rows.rows(); }

    // Column vectors as points (frames x features), the layout k-means consumes.
    Matrix frame_points() const { return rows.transposed(); }
};

enum class RowNormalization {
    MaxAbs,  // divide each row by its largest absolute entry
    Sum,     // divide each row by the sum of its absolute entries
};

DistanceMatrix cosine_distance_matrix(const FrameEmbeddingSequence& seq);
// Same on an in-memory T x d matrix of double-precision embeddings.
DistanceMatrix cosine_distance_matrix(const Matrix& embeddings);

ContextualizedFrameMatrix contextualize(const DistanceMatrix& distances,
                                        RowNormalization normalization = RowNormalization::MaxAbs);

// Numerically stable softmax (max-logit subtraction), summed left to right.
std::vector<double> softmax(std::span<const double> logits);

}  // namespace vidlog
