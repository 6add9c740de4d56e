#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vidlog/embedding_store.hpp"
#include "vidlog/segmentation.hpp"

namespace vidlog {

struct VideoSegments {
    std::string video_id;
    std::vector<EventSegment> segments;
};

// .segments.json: flat array of {video_id, start_frame, end_frame,
// cluster_id, label?, distribution?}. Reading groups rows by video_id in
// order of first appearance. Centroids are not persisted.
std::string segments_to_json(const std::vector<VideoSegments>& videos);
std::vector<VideoSegments> segments_from_json(const std::string& text);

// .labels.json: array of {video_id, start_frame, end_frame, label}.
struct SegmentLabel {
    SegmentRef segment;
    std::string label;
};
std::string labels_to_json(const std::vector<SegmentLabel>& labels);
std::vector<SegmentLabel> labels_from_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);

// Named text artifacts, written only once everything has been computed.
using ArtifactSet = std::map<std::string, std::string>;

// Writes each artifact through a temporary file and a rename.
void write_artifacts(const std::filesystem::path& dir, const ArtifactSet& artifacts);

}  // namespace vidlog
