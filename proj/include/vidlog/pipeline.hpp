#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vidlog/artifacts.hpp"
#include "vidlog/embedding_store.hpp"
#include "vidlog/event_log.hpp"
#include "vidlog/fewshot.hpp"
#include "vidlog/log_io.hpp"
#include "vidlog/segmentation.hpp"

namespace vidlog {

// Points the silhouette report is computed on.
enum class SilhouetteSpace {
    Contextualized,  // the (T+1)-dimensional vectors k-means clusters
    Raw,             // the frame embeddings as stored
};

struct PipelineConfig {
    std::vector<std::filesystem::path> embeddings;        // videos to segment and log
    std::vector<std::filesystem::path> train_embeddings;  // extra videos referenced by --labels
    std::vector<std::filesystem::path> clip_embeddings;   // optional precomputed clip sets (kind 1)

    std::size_t k = 7;
    std::uint64_t seed = 0;
    std::size_t restarts = 10;
    RowNormalization normalization = RowNormalization::MaxAbs;
    MergeCentroid merge_centroid = MergeCentroid::EventMean;

    ClipMode clip_mode = ClipMode::NonOverlapping;
    std::size_t clips_per_segment = 10;
    Aggregation aggregation = Aggregation::Mean;
    double lr = 0.01;
    std::size_t epochs = 10;
    std::size_t top_k = 3;

    std::optional<std::filesystem::path> labels;    // training labels
    std::optional<std::filesystem::path> head;      // pretrained head (skips training)
    std::optional<std::filesystem::path> segments;  // input of classify / log / eval
    std::optional<std::filesystem::path> truth;     // ground-truth labels for eval
    std::optional<std::filesystem::path> log;       // certain log read by dfg

    std::optional<Rational> fps;
    std::optional<double> base_time;  // UTC epoch seconds

    LogFormat format = LogFormat::Csv;
    std::filesystem::path out = ".";
    std::size_t jobs = 1;

    std::vector<std::size_t> silhouette_ks = {3, 5, 7};
    SilhouetteSpace silhouette_space = SilhouetteSpace::Contextualized;

    // Throws ConfigError on contradictions that need no input data.
    void validate() const;
};

// Artifact names inside the output directory.
namespace artifact {
inline constexpr const char* kSegments = "segments.json";
inline constexpr const char* kHead = "head.json";
inline constexpr const char* kLabeledSegments = "labeled.segments.json";
inline constexpr const char* kDfg = "dfg.dot";
inline constexpr const char* kMetrics = "metrics.json";
std::string certain_log(LogFormat format);
std::string uncertain_log(LogFormat format);
}  // namespace artifact

// Loads embedding files sorted by video id, applying fps/base_time overrides.
std::vector<FrameEmbeddingSequence> load_videos(const std::vector<std::filesystem::path>& paths,
                                                const PipelineConfig& config);

// Segments every video, up to config.jobs in parallel; output in video order.
std::vector<VideoSegments> segment_videos(const std::vector<FrameEmbeddingSequence>& videos,
                                          const PipelineConfig& config);

// Clip embeddings of one segment: a matching precomputed clip set if given,
// otherwise the mean frame embedding of each sampled 16-frame window.
class ClipSource {
public:
    explicit ClipSource(const PipelineConfig& config);

    std::vector<std::vector<double>> clips(const FrameEmbeddingSequence& video, std::size_t start_frame,
                                           std::size_t end_frame) const;

private:
    const PipelineConfig& config_;
    std::map<SegmentRef, ClipEmbeddingSet> precomputed_;
};

TrainingResult train_from_labels(const std::vector<SegmentLabel>& labels,
                                 const std::vector<FrameEmbeddingSequence>& videos, const PipelineConfig& config);

std::vector<VideoSegments> classify_segments(const std::vector<VideoSegments>& segments,
                                             const std::vector<FrameEmbeddingSequence>& videos,
                                             const LinearHead& head, const PipelineConfig& config);

struct BuiltLogs {
    EventLog certain;
    UncertainEventLog uncertain;  // top-k truncated
};

BuiltLogs build_logs(const std::vector<VideoSegments>& labeled, const std::vector<FrameEmbeddingSequence>& videos,
                     const PipelineConfig& config);

// Metrics report; fields without the data to compute them are null.
std::string metrics_json(const std::vector<FrameEmbeddingSequence>& videos,
                         const std::vector<VideoSegments>& segments, const std::vector<SegmentLabel>* truth,
                         const PipelineConfig& config);

// Stage entry points used by the CLI. Each returns the artifacts it produces;
// nothing touches the filesystem except reading inputs.
ArtifactSet stage_segment(const PipelineConfig& config);
ArtifactSet stage_train_head(const PipelineConfig& config);
ArtifactSet stage_classify(const PipelineConfig& config);
ArtifactSet stage_log(const PipelineConfig& config);
ArtifactSet stage_dfg(const PipelineConfig& config);
ArtifactSet stage_eval(const PipelineConfig& config);
ArtifactSet run_pipeline(const PipelineConfig& config);

}  // namespace vidlog
