#pragma once

// Synthetic three-video fixture shared by the pipeline tests and the
// acceptance suite: one labelled training video plus three videos to log,
// all drawn around the same activity centres.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vidlog/artifacts.hpp"
#include "vidlog/embedding_store.hpp"
#include "vidlog/eval.hpp"

namespace fixture {

struct Video {
    std::string id;
    std::vector<std::size_t> order;  // activity per scripted segment
};

inline const std::vector<Video>& videos() {
    static const std::vector<Video> v = {{"video_a", {1, 2, 3}}, {"video_b", {3, 1, 2}}, {"video_c", {2, 3, 1}}};
    return v;
}

inline std::string activity(std::size_t c) { return "activity_" + std::to_string(c); }

struct Files {
    std::vector<std::filesystem::path> embeddings;
    std::filesystem::path train_embeddings;
    std::filesystem::path train_labels;
    std::filesystem::path truth;
};

inline constexpr std::size_t kSegmentLength = 80;
inline constexpr std::uint64_t kCenterSeed = 4242;

inline void write_bytes(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::vector<vidlog::SegmentLabel> labels_of(const std::string& id, const std::vector<std::size_t>& order) {
    std::vector<vidlog::SegmentLabel> out;
    for (std::size_t i = 0; i < order.size(); ++i)
        out.push_back({{id, i * kSegmentLength, (i + 1) * kSegmentLength}, activity(order[i])});
    return out;
}

inline vidlog::SyntheticVideo synth(const std::string& id, const std::vector<std::size_t>& order, std::uint64_t seed) {
    vidlog::SegmentScript script;
    for (auto c : order) script.segments.push_back({c, kSegmentLength});
    script.seed = seed;
    script.center_seed = kCenterSeed;
    script.video_id = id;
    script.base_time = 1700000000.0 + 3600.0 * static_cast<double>(seed);
    return vidlog::synth_sequence(script);
}

inline Files write(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    Files f;
    std::vector<vidlog::SegmentLabel> truth;
    std::uint64_t seed = 1;
    for (const auto& v : videos()) {
        const auto path = dir / (v.id + ".semb");
        write_bytes(path, vidlog::write_embeddings(synth(v.id, v.order, seed++).sequence));
        f.embeddings.push_back(path);
        for (auto& l : labels_of(v.id, v.order)) truth.push_back(l);
    }
    const std::vector<std::size_t> train_order = {1, 2, 3};
    f.train_embeddings = dir / "train.semb";
    write_bytes(f.train_embeddings, vidlog::write_embeddings(synth("train", train_order, 100).sequence));
    f.train_labels = dir / "train.labels.json";
    write_text(f.train_labels, vidlog::labels_to_json(labels_of("train", train_order)));
    f.truth = dir / "truth.labels.json";
    write_text(f.truth, vidlog::labels_to_json(truth));
    return f;
}

}  // namespace fixture
