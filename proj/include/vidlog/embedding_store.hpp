#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vidlog/rational.hpp"

namespace vidlog {

// Binary embedding file (.semb), all integers little-endian:
//
//   "SEMB" | version u32 = 1 | kind u8 | T u64 | d u64 | fps num u32 |
//   fps den u32 | base_time f64 | id length u16 | id bytes | T*d f32
//
// kind 0 holds the frame embeddings of one video, kind 1 holds the clip
// embeddings of one segment (T = number of clips).
inline constexpr std::uint32_t kSembVersion = 1;

enum class EmbeddingKind : std::uint8_t { FrameSequence = 0, ClipSet = 1 };

struct FrameEmbeddingSequence {
    std::string video_id;
    Rational fps{25};
    double base_time = 0.0;  // UTC epoch seconds
    std::size_t frames = 0;
    std::size_t dim = 0;
    std::vector<float> data;  // frames x dim, frame-major

    std::span<const float> frame(std::size_t i) const { return {data.data() + i * dim, dim}; }

    // Throws InputError when an invariant is violated.
    void validate() const;

    friend bool operator==(const FrameEmbeddingSequence&, const FrameEmbeddingSequence&) = default;
};

struct SegmentRef {
    std::string video_id;
    std::size_t start_frame = 0;
    std::size_t end_frame = 0;

    friend auto operator<=>(const SegmentRef&, const SegmentRef&) = default;
};

// Clip embeddings of one segment. On disk the segment reference is carried
// in the id field as "<video_id>@<start>-<end>".
struct ClipEmbeddingSet {
    SegmentRef segment;
    std::size_t dim = 0;
    std::vector<std::vector<float>> clips;
    std::optional<std::string> label;

    void validate() const;
};

std::vector<std::uint8_t> write_embeddings(const FrameEmbeddingSequence& seq);
FrameEmbeddingSequence read_embeddings(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> write_clip_set(const ClipEmbeddingSet& set, const Rational& fps = Rational{25},
                                         double base_time = 0.0);
ClipEmbeddingSet read_clip_set(std::span<const std::uint8_t> bytes);

std::string encode_segment_ref(const SegmentRef& ref);
SegmentRef decode_segment_ref(const std::string& text);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
FrameEmbeddingSequence load_embeddings(const std::filesystem::path& path);
ClipEmbeddingSet load_clip_set(const std::filesystem::path& path);

}  // namespace vidlog
