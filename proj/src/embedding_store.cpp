#include "vidlog/embedding_store.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "vidlog/errors.hpp"

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
static_assert(std::numeric_limits<float>::is_iec559 && std::numeric_limits<double>::is_iec559);

namespace vidlog {
namespace {

constexpr char kMagic[4] = {'S', 'E', 'M', 'B'};

class ByteWriter {
public:
    template <typename T>
    void put(T value) {
        static_assert(std::is_trivially_copyable_v<T>);
        unsigned char raw[sizeof(T)];
        std::memcpy(raw, &value, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
        out_.insert(out_.end(), raw, raw + sizeof(T));
    }
    void put_bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        out_.insert(out_.end(), b, b + n);
    }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    template <typename T>
    T get() {
        if (remaining() < sizeof(T)) throw FormatError("embedding header is truncated");
        unsigned char raw[sizeof(T)];
        std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
        pos_ += sizeof(T);
        T value;
        std::memcpy(&value, raw, sizeof(T));
        return value;
    }
    std::string get_string(std::size_t n) {
        if (remaining() < n) throw FormatError("embedding header is truncated");
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
        pos_ += n;
        return s;
    }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
    std::size_t position() const noexcept { return pos_; }
    std::span<const std::uint8_t> rest() const noexcept { return bytes_.subspan(pos_); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

struct Header {
    EmbeddingKind kind{};
    std::uint64_t rows = 0;
    std::uint64_t dim = 0;
    Rational fps;
    double base_time = 0.0;
    std::string id;
};

void write_header(ByteWriter& w, const Header& h) {
    if (h.fps.num() <= 0 || h.fps.num() > std::numeric_limits<std::uint32_t>::max() ||
        h.fps.den() > std::numeric_limits<std::uint32_t>::max())
        throw InputError("fps " + h.fps.str() + " does not fit the u32/u32 header fields");
    if (h.id.size() > std::numeric_limits<std::uint16_t>::max())
        throw InputError("id longer than 65535 bytes");
    w.put_bytes(kMagic, 4);
    w.put<std::uint32_t>(kSembVersion);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(h.kind));
    w.put<std::uint64_t>(h.rows);
    w.put<std::uint64_t>(h.dim);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(h.fps.num()));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(h.fps.den()));
    w.put<double>(h.base_time);
    w.put<std::uint16_t>(static_cast<std::uint16_t>(h.id.size()));
    w.put_bytes(h.id.data(), h.id.size());
}

// Reads the header and returns the decoded payload as floats.
std::vector<float> read_file(std::span<const std::uint8_t> bytes, Header& h) {
    ByteReader r(bytes);
    if (r.remaining() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw FormatError("bad magic, not an embedding file");
    r.get_string(4);
    const auto version = r.get<std::uint32_t>();
    if (version != kSembVersion) throw FormatError("unsupported format version " + std::to_string(version));
    const auto kind = r.get<std::uint8_t>();
    if (kind > 1) throw FormatError("unknown embedding kind " + std::to_string(kind));
    h.kind = static_cast<EmbeddingKind>(kind);
    h.rows = r.get<std::uint64_t>();
    h.dim = r.get<std::uint64_t>();
    const auto num = r.get<std::uint32_t>();
    const auto den = r.get<std::uint32_t>();
    if (num == 0 || den == 0) throw FormatError("fps must be a positive rational");
    h.fps = Rational(num, den);
    h.base_time = r.get<double>();
    if (!std::isfinite(h.base_time)) throw FormatError("base_time is not finite");
    const auto id_len = r.get<std::uint16_t>();
    h.id = r.get_string(id_len);
    if (h.rows == 0 || h.dim == 0) throw FormatError("embedding shape must be at least 1x1");

    const std::uint64_t max_entries = std::numeric_limits<std::uint64_t>::max() / sizeof(float);
    if (h.rows > max_entries / h.dim) throw TruncatedPayload("header shape overflows");
    const std::uint64_t expected = h.rows * h.dim * sizeof(float);
    if (r.remaining() != expected)
        throw TruncatedPayload("payload has " + std::to_string(r.remaining()) + " bytes, header promises " +
                               std::to_string(expected));

    std::vector<float> data(h.rows * h.dim);
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = r.get<float>();
        if (!std::isfinite(data[i])) throw NonFiniteValue("non-finite value at entry " + std::to_string(i));
    }
    return data;
}

}  // namespace

void FrameEmbeddingSequence::validate() const {
    if (frames < 1) throw InputError("sequence must contain at least one frame");
    if (dim < 1) throw InputError("embedding dimension must be at least 1");
    if (fps.num() <= 0) throw InputError("fps must be positive");
    if (data.size() != frames * dim) throw InputError("data size does not match frames x dim");
    for (float v : data)
        if (!std::isfinite(v)) throw NonFiniteValue("sequence contains a non-finite value");
}

void ClipEmbeddingSet::validate() const {
    if (clips.empty()) throw EmptyInput("clip set is empty");
    for (const auto& c : clips)
        if (c.size() != dim) throw DimensionMismatch("clip dimension differs from set dimension");
}

std::vector<std::uint8_t> write_embeddings(const FrameEmbeddingSequence& seq) {
    ByteWriter w;
    write_header(w, Header{EmbeddingKind::FrameSequence, seq.frames, seq.dim, seq.fps, seq.base_time,
                           seq.video_id});
    for (float v : seq.data) w.put<float>(v);
    return w.take();
}

FrameEmbeddingSequence read_embeddings(std::span<const std::uint8_t> bytes) {
    Header h;
    auto data = read_file(bytes, h);
    if (h.kind != EmbeddingKind::FrameSequence) throw FormatError("expected a frame sequence (kind 0)");
    FrameEmbeddingSequence seq;
    seq.video_id = std::move(h.id);
    seq.fps = h.fps;
    seq.base_time = h.base_time;
    seq.frames = h.rows;
    seq.dim = h.dim;
    seq.data = std::move(data);
    return seq;
}

std::string encode_segment_ref(const SegmentRef& ref) {
    return ref.video_id + "@" + std::to_string(ref.start_frame) + "-" + std::to_string(ref.end_frame);
}

SegmentRef decode_segment_ref(const std::string& text) {
    const auto at = text.rfind('@');
    const auto dash = text.rfind('-');
    if (at == std::string::npos || dash == std::string::npos || dash < at)
        throw FormatError("clip set id '" + text + "' is not of the form video@start-end");
    SegmentRef ref;
    ref.video_id = text.substr(0, at);
    try {
        std::size_t used = 0;
        const std::string a = text.substr(at + 1, dash - at - 1);
        const std::string b = text.substr(dash + 1);
        ref.start_frame = std::stoull(a, &used);
        if (used != a.size()) throw FormatError("bad start frame");
        ref.end_frame = std::stoull(b, &used);
        if (used != b.size()) throw FormatError("bad end frame");
    } catch (const std::logic_error&) {
        throw FormatError("clip set id '" + text + "' has non-numeric frame bounds");
    }
    if (ref.start_frame >= ref.end_frame) throw FormatError("clip set segment is empty");
    return ref;
}

std::vector<std::uint8_t> write_clip_set(const ClipEmbeddingSet& set, const Rational& fps, double base_time) {
    set.validate();
    ByteWriter w;
    write_header(w, Header{EmbeddingKind::ClipSet, set.clips.size(), set.dim, fps, base_time,
                           encode_segment_ref(set.segment)});
    for (const auto& clip : set.clips)
        for (float v : clip) w.put<float>(v);
    return w.take();
}

ClipEmbeddingSet read_clip_set(std::span<const std::uint8_t> bytes) {
    Header h;
    auto data = read_file(bytes, h);
    if (h.kind != EmbeddingKind::ClipSet) throw FormatError("expected a clip set (kind 1)");
    ClipEmbeddingSet set;
    set.segment = decode_segment_ref(h.id);
    set.dim = h.dim;
    set.clips.reserve(h.rows);
    for (std::size_t i = 0; i < h.rows; ++i)
        set.clips.emplace_back(data.begin() + static_cast<std::ptrdiff_t>(i * h.dim),
                               data.begin() + static_cast<std::ptrdiff_t>((i + 1) * h.dim));
    return set;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

FrameEmbeddingSequence load_embeddings(const std::filesystem::path& path) {
    try {
        return read_embeddings(read_file_bytes(path));
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

ClipEmbeddingSet load_clip_set(const std::filesystem::path& path) {
    try {
        return read_clip_set(read_file_bytes(path));
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

}  // namespace vidlog
