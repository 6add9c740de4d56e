#include "vidlog/artifacts.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vidlog/errors.hpp"

namespace vidlog {

using nlohmann::ordered_json;

std::string segments_to_json(const std::vector<VideoSegments>& videos) {
    ordered_json rows = ordered_json::array();
    for (const auto& video : videos) {
        for (const auto& s : video.segments) {
            ordered_json row;
            row["video_id"] = video.video_id;
            row["start_frame"] = s.start_frame;
            row["end_frame"] = s.end_frame;
            row["cluster_id"] = s.cluster_id;
            if (s.label_distribution) {
                row["label"] = s.label_distribution->most_likely();
                ordered_json dist = ordered_json::object();
                for (std::size_t i = 0; i < s.label_distribution->size(); ++i)
                    dist[s.label_distribution->labels[i]] = s.label_distribution->probabilities[i];
                row["distribution"] = std::move(dist);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows.dump(2) + "\n";
}

std::vector<VideoSegments> segments_from_json(const std::string& text) {
    try {
        const auto rows = ordered_json::parse(text);
        if (!rows.is_array()) throw InputError("segments file must hold a JSON array");
        std::vector<VideoSegments> videos;
        std::map<std::string, std::size_t> index;
        for (const auto& row : rows) {
            const auto id = row.at("video_id").get<std::string>();
            auto [it, inserted] = index.emplace(id, videos.size());
            if (inserted) videos.push_back(VideoSegments{id, {}});
            EventSegment s;
            s.start_frame = row.at("start_frame").get<std::size_t>();
            s.end_frame = row.at("end_frame").get<std::size_t>();
            s.cluster_id = row.at("cluster_id").get<std::size_t>();
            if (s.start_frame >= s.end_frame) throw InputError("segment with empty frame interval");
            if (row.contains("distribution")) {
                LabelDistribution d;
                for (const auto& [label, p] : row.at("distribution").items()) {
                    d.labels.push_back(label);
                    d.probabilities.push_back(p.get<double>());
                }
                d.validate();
                s.label_distribution = std::move(d);
            }
            videos[it->second].segments.push_back(std::move(s));
        }
        return videos;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed segments file: ") + e.what());
    }
}

std::string labels_to_json(const std::vector<SegmentLabel>& labels) {
    ordered_json rows = ordered_json::array();
    for (const auto& l : labels) {
        ordered_json row;
        row["video_id"] = l.segment.video_id;
        row["start_frame"] = l.segment.start_frame;
        row["end_frame"] = l.segment.end_frame;
        row["label"] = l.label;
        rows.push_back(std::move(row));
    }
    return rows.dump(2) + "\n";
}

std::vector<SegmentLabel> labels_from_json(const std::string& text) {
    try {
        const auto rows = ordered_json::parse(text);
        if (!rows.is_array()) throw InputError("labels file must hold a JSON array");
        std::vector<SegmentLabel> out;
        for (const auto& row : rows) {
            SegmentLabel l;
            l.segment.video_id = row.at("video_id").get<std::string>();
            l.segment.start_frame = row.at("start_frame").get<std::size_t>();
            l.segment.end_frame = row.at("end_frame").get<std::size_t>();
            l.label = row.at("label").get<std::string>();
            if (l.segment.start_frame >= l.segment.end_frame)
                throw InputError("labelled segment with empty frame interval");
            out.push_back(std::move(l));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed labels file: ") + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_artifacts(const std::filesystem::path& dir, const ArtifactSet& artifacts) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const auto& [name, content] : artifacts) {
        const fs::path target = dir / name;
        const fs::path temp = dir / (name + ".tmp");
        {
            std::ofstream out(temp, std::ios::binary | std::ios::trunc);
            if (!out) throw InputError("cannot write " + temp.string());
            out << content;
            if (!out) throw InputError("write failed for " + temp.string());
        }
        fs::rename(temp, target);
    }
}

}  // namespace vidlog
