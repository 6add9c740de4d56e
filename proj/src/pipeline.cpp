#include "vidlog/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <thread>

#include "json.hpp"
#include "vidlog/dfg.hpp"
#include "vidlog/errors.hpp"
#include "vidlog/eval.hpp"
#include "vidlog/rng.hpp"

namespace vidlog {
namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

const FrameEmbeddingSequence& find_video(const std::vector<FrameEmbeddingSequence>& videos, const std::string& id) {
    for (const auto& v : videos)
        if (v.video_id == id) return v;
    throw InputError("no embeddings loaded for video '" + id + "'");
}

std::vector<VideoSegments> load_segments(const PipelineConfig& config) {
    if (!config.segments) throw InputError("--segments is required for this stage");
    return segments_from_json(read_text_file(*config.segments));
}

std::vector<SegmentLabel> load_labels(const std::filesystem::path& path) {
    return labels_from_json(read_text_file(path));
}

LinearHead load_head(const std::filesystem::path& path) { return head_from_json(read_text_file(path)); }

// Per-frame truth labels of one video; frames without a label stay empty.
std::vector<std::string> truth_frames(const std::vector<SegmentLabel>& truth, const std::string& video_id,
                                      std::size_t frames) {
    std::vector<std::string> out(frames);
    for (const auto& l : truth) {
        if (l.segment.video_id != video_id) continue;
        if (l.segment.end_frame > frames) throw InputError("truth segment exceeds the video length");
        for (std::size_t f = l.segment.start_frame; f < l.segment.end_frame; ++f) out[f] = l.label;
    }
    return out;
}

std::string majority_label(const std::vector<std::string>& frames, std::size_t start, std::size_t end) {
    std::map<std::string, std::size_t> counts;
    for (std::size_t f = start; f < end; ++f) ++counts[frames[f]];
    std::string best;
    std::size_t best_count = 0;
    for (const auto& [label, count] : counts)  // ascending label order breaks ties
        if (count > best_count) {
            best = label;
            best_count = count;
        }
    return best;
}

const char* to_string(RowNormalization n) { return n == RowNormalization::MaxAbs ? "max" : "sum"; }
const char* to_string(MergeCentroid m) { return m == MergeCentroid::EventMean ? "event-mean" : "cluster"; }

template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

void PipelineConfig::validate() const {
    if (k < 1) throw ConfigError("--k must be at least 1");
    if (restarts < 1) throw ConfigError("--restarts must be at least 1");
    if (clips_per_segment < 1) throw ConfigError("--clips-per-segment must be at least 1");
    if (!(lr > 0.0)) throw ConfigError("--lr must be positive");
    if (top_k < 1) throw ConfigError("--top-k must be at least 1");
    if (jobs < 1) throw ConfigError("--jobs must be at least 1");
    if (fps && fps->num() <= 0) throw ConfigError("--fps must be positive");
}

namespace artifact {
std::string certain_log(LogFormat format) { return format == LogFormat::Xes ? "log.xes" : "log.csv"; }
std::string uncertain_log(LogFormat format) {
    return format == LogFormat::Csv ? "uncertain_log.csv" : "uncertain_log.ujson";
}
}  // namespace artifact

std::vector<FrameEmbeddingSequence> load_videos(const std::vector<std::filesystem::path>& paths,
                                                const PipelineConfig& config) {
    std::vector<FrameEmbeddingSequence> videos;
    for (const auto& p : paths) {
        auto seq = load_embeddings(p);
        if (config.fps) seq.fps = *config.fps;
        if (config.base_time) seq.base_time = *config.base_time;
        videos.push_back(std::move(seq));
    }
    std::sort(videos.begin(), videos.end(),
              [](const auto& a, const auto& b) { return a.video_id < b.video_id; });
    for (std::size_t i = 1; i < videos.size(); ++i)
        if (videos[i].video_id == videos[i - 1].video_id)
            throw InputError("two embedding files share video id '" + videos[i].video_id + "'");
    return videos;
}

std::vector<VideoSegments> segment_videos(const std::vector<FrameEmbeddingSequence>& videos,
                                          const PipelineConfig& config) {
    SegmentOptions options;
    options.k = config.k;
    options.seed = config.seed;
    options.restarts = config.restarts;
    options.normalization = config.normalization;
    options.merge_centroid = config.merge_centroid;

    for (const auto& v : videos)
        if (config.k > v.frames)
            throw InvalidK("k = " + std::to_string(config.k) + " exceeds the " + std::to_string(v.frames) +
                           " frames of '" + v.video_id + "'");

    std::vector<VideoSegments> out(videos.size());
    parallel_for(videos.size(), config.jobs, [&](std::size_t i) {
        out[i] = VideoSegments{videos[i].video_id, segment_video_detailed(videos[i], options).segments};
    });
    return out;
}

ClipSource::ClipSource(const PipelineConfig& config) : config_(config) {
    for (const auto& p : config.clip_embeddings) {
        auto set = load_clip_set(p);
        const auto ref = set.segment;
        precomputed_.insert_or_assign(ref, std::move(set));
    }
}

std::vector<std::vector<double>> ClipSource::clips(const FrameEmbeddingSequence& video, std::size_t start_frame,
                                                   std::size_t end_frame) const {
    if (end_frame > video.frames || start_frame >= end_frame)
        throw InputError("segment [" + std::to_string(start_frame) + ", " + std::to_string(end_frame) +
                         ") lies outside video '" + video.video_id + "'");
    std::vector<std::vector<double>> out;
    if (const auto it = precomputed_.find(SegmentRef{video.video_id, start_frame, end_frame});
        it != precomputed_.end()) {
        for (const auto& c : it->second.clips) out.emplace_back(c.begin(), c.end());
        return out;
    }

    const std::uint64_t seed = Rng(config_.seed, fnv1a(video.video_id) + start_frame).next();
    for (const auto& window : sample_clips(end_frame - start_frame, config_.clip_mode, config_.clips_per_segment,
                                           seed)) {
        std::vector<double> pooled(video.dim, 0.0);
        for (auto offset : window.frames) {
            const auto f = video.frame(start_frame + offset);
            for (std::size_t j = 0; j < video.dim; ++j) pooled[j] += f[j];
        }
        for (double& v : pooled) v /= static_cast<double>(kClipLength);
        out.push_back(std::move(pooled));
    }
    return out;
}

TrainingResult train_from_labels(const std::vector<SegmentLabel>& labels,
                                 const std::vector<FrameEmbeddingSequence>& videos, const PipelineConfig& config) {
    if (labels.empty()) throw InputError("labels file holds no labelled segments");
    const ClipSource source(config);
    std::vector<LabeledClip> clips;
    std::set<std::string> names;
    for (const auto& l : labels) {
        const auto& video = find_video(videos, l.segment.video_id);
        for (auto& z : source.clips(video, l.segment.start_frame, l.segment.end_frame))
            clips.push_back(LabeledClip{std::move(z), l.label});
        names.insert(l.label);
    }
    if (names.size() < 2) throw InputError("training needs at least two distinct labels");
    return train_head(clips, std::vector<std::string>(names.begin(), names.end()), config.lr, config.epochs);
}

std::vector<VideoSegments> classify_segments(const std::vector<VideoSegments>& segments,
                                             const std::vector<FrameEmbeddingSequence>& videos,
                                             const LinearHead& head, const PipelineConfig& config) {
    const ClipSource source(config);
    std::vector<VideoSegments> out = segments;
    parallel_for(out.size(), config.jobs, [&](std::size_t i) {
        const auto& video = find_video(videos, out[i].video_id);
        for (auto& s : out[i].segments) {
            std::vector<LabelDistribution> per_clip;
            for (const auto& z : source.clips(video, s.start_frame, s.end_frame))
                per_clip.push_back(predict_clip(head, z));
            s.label_distribution = aggregate_segment(per_clip, config.aggregation);
        }
    });
    return out;
}

BuiltLogs build_logs(const std::vector<VideoSegments>& labeled, const std::vector<FrameEmbeddingSequence>& videos,
                     const PipelineConfig& config) {
    std::vector<Trace> certain;
    std::vector<UncertainTrace> uncertain;
    for (const auto& v : labeled) {
        const auto& video = find_video(videos, v.video_id);
        const FrameClock clock(video.fps, video.base_time);
        certain.push_back(to_certain_trace(v.segments, clock, v.video_id));
        uncertain.push_back(truncate_trace_topk(to_uncertain_trace(v.segments, clock, v.video_id), config.top_k));
    }
    return BuiltLogs{make_log(std::move(certain)), make_log(std::move(uncertain))};
}

std::string metrics_json(const std::vector<FrameEmbeddingSequence>& videos,
                         const std::vector<VideoSegments>& segments, const std::vector<SegmentLabel>* truth,
                         const PipelineConfig& config) {
    nlohmann::ordered_json m;

    // frame accuracy, frame-weighted over videos with ground truth
    m["frame_accuracy"] = nullptr;
    if (truth) {
        double matched = 0.0;
        std::size_t frames = 0;
        for (const auto& v : segments) {
            const auto& video = find_video(videos, v.video_id);
            const auto names = truth_frames(*truth, v.video_id, video.frames);
            if (std::all_of(names.begin(), names.end(), [](const auto& s) { return s.empty(); })) continue;
            std::map<std::string, std::size_t> ids;
            std::vector<std::size_t> truth_ids;
            for (const auto& n : names) truth_ids.push_back(ids.emplace(n, ids.size() + 1).first->second);
            const auto predicted = frame_labels(v.segments);
            matched += frame_accuracy(std::span<const std::size_t>(predicted), truth_ids) *
                       static_cast<double>(video.frames);
            frames += video.frames;
        }
        if (frames > 0) m["frame_accuracy"] = matched / static_cast<double>(frames);
    }

    std::set<std::size_t> ks(config.silhouette_ks.begin(), config.silhouette_ks.end());
    ks.insert(config.k);
    std::map<std::size_t, std::pair<double, std::size_t>> silhouette;
    for (const auto& video : videos) {
        Matrix points;
        if (config.silhouette_space == SilhouetteSpace::Raw) {
            points = Matrix(video.frames, video.dim);
            for (std::size_t i = 0; i < video.data.size(); ++i) points.data()[i] = video.data[i];
        } else {
            points = contextualize(cosine_distance_matrix(video), config.normalization).frame_points();
        }
        for (auto k : ks) {
            if (k < 2 || k > video.frames) continue;
            const auto assignment = kmeans_cluster(points, k, config.seed, config.restarts);
            try {
                auto& [sum, n] = silhouette[k];
                sum += silhouette_score(points, assignment);
                ++n;
            } catch (const SingleCluster&) {
            }
        }
    }
    nlohmann::ordered_json by_k = nlohmann::ordered_json::object();
    for (const auto& [k, acc] : silhouette)
        if (acc.second > 0) by_k[std::to_string(k)] = acc.first / static_cast<double>(acc.second);
    m["silhouette_by_k"] = std::move(by_k);

    m["top1"] = nullptr;
    m["top3"] = nullptr;
    if (truth) {
        std::vector<LabelDistribution> predictions;
        std::vector<std::string> truths;
        for (const auto& v : segments) {
            const auto& video = find_video(videos, v.video_id);
            const auto names = truth_frames(*truth, v.video_id, video.frames);
            for (const auto& s : v.segments) {
                if (!s.label_distribution) continue;
                auto label = majority_label(names, s.start_frame, s.end_frame);
                if (label.empty()) continue;
                predictions.push_back(*s.label_distribution);
                truths.push_back(std::move(label));
            }
        }
        if (!predictions.empty()) {
            m["top1"] = top_k_accuracy(predictions, truths, 1);
            m["top3"] = top_k_accuracy(predictions, truths, 3);
        }
    }

    m["seeds"] = {config.seed};
    nlohmann::ordered_json echo;
    echo["k"] = config.k;
    echo["restarts"] = config.restarts;
    echo["normalization"] = to_string(config.normalization);
    echo["merge_centroid"] = to_string(config.merge_centroid);
    echo["clip_mode"] = to_string(config.clip_mode);
    echo["clips_per_segment"] = config.clips_per_segment;
    echo["aggregation"] = to_string(config.aggregation);
    echo["silhouette_space"] = config.silhouette_space == SilhouetteSpace::Raw ? "raw" : "contextualized";
    echo["lr"] = config.lr;
    echo["epochs"] = config.epochs;
    echo["top_k"] = config.top_k;
    echo["format"] = to_string(config.format);
    echo["videos"] = videos.size();
    m["config"] = std::move(echo);
    return m.dump(2) + "\n";
}

ArtifactSet stage_segment(const PipelineConfig& config) {
    config.validate();
    const auto videos = load_videos(config.embeddings, config);
    return {{artifact::kSegments, segments_to_json(segment_videos(videos, config))}};
}

ArtifactSet stage_train_head(const PipelineConfig& config) {
    config.validate();
    if (!config.labels) throw InputError("--labels is required to train a head");
    auto paths = config.train_embeddings;
    paths.insert(paths.end(), config.embeddings.begin(), config.embeddings.end());
    const auto videos = load_videos(paths, config);
    const auto trained = train_from_labels(load_labels(*config.labels), videos, config);
    return {{artifact::kHead, head_to_json(trained.head)}};
}

ArtifactSet stage_classify(const PipelineConfig& config) {
    config.validate();
    if (!config.head) throw InputError("--head is required to classify segments");
    const auto videos = load_videos(config.embeddings, config);
    const auto labeled = classify_segments(load_segments(config), videos, load_head(*config.head), config);
    return {{artifact::kLabeledSegments, segments_to_json(labeled)}};
}

ArtifactSet stage_log(const PipelineConfig& config) {
    config.validate();
    const auto videos = load_videos(config.embeddings, config);
    const auto logs = build_logs(load_segments(config), videos, config);
    return {{artifact::certain_log(config.format), serialize_log(logs.certain, config.format == LogFormat::Xes
                                                                                   ? LogFormat::Xes
                                                                                   : LogFormat::Csv)},
            {artifact::uncertain_log(config.format), serialize_log(logs.uncertain, config.format == LogFormat::Csv
                                                                                       ? LogFormat::Csv
                                                                                       : LogFormat::Ujson)}};
}

ArtifactSet stage_dfg(const PipelineConfig& config) {
    if (!config.log) throw InputError("--log is required to discover a directly-follows graph");
    const auto format = config.log->extension() == ".xes" ? LogFormat::Xes : LogFormat::Csv;
    const auto log = parse_event_log(read_text_file(*config.log), format);
    return {{artifact::kDfg, to_dot(discover_dfg(log))}};
}

ArtifactSet stage_eval(const PipelineConfig& config) {
    config.validate();
    const auto videos = load_videos(config.embeddings, config);
    const auto segments = load_segments(config);
    std::vector<SegmentLabel> truth;
    if (config.truth) truth = load_labels(*config.truth);
    return {{artifact::kMetrics, metrics_json(videos, segments, config.truth ? &truth : nullptr, config)}};
}

ArtifactSet run_pipeline(const PipelineConfig& config) {
    config.validate();
    if (config.embeddings.empty()) throw InputError("--embeddings names no input files");
    ArtifactSet out;
    const auto videos = load_videos(config.embeddings, config);

    std::optional<LinearHead> head;
    if (config.head) {
        head = load_head(*config.head);
    } else if (config.labels) {
        auto paths = config.train_embeddings;
        paths.insert(paths.end(), config.embeddings.begin(), config.embeddings.end());
        const auto training_videos = load_videos(paths, config);
        head = train_from_labels(load_labels(*config.labels), training_videos, config).head;
        out[artifact::kHead] = head_to_json(*head);
    } else {
        throw InputError("run needs --labels to train a head or --head to reuse one");
    }

    const auto segments = segment_videos(videos, config);
    out[artifact::kSegments] = segments_to_json(segments);
    const auto labeled = classify_segments(segments, videos, *head, config);
    out[artifact::kLabeledSegments] = segments_to_json(labeled);

    const auto logs = build_logs(labeled, videos, config);
    const auto certain_format = config.format == LogFormat::Xes ? LogFormat::Xes : LogFormat::Csv;
    const auto uncertain_format = config.format == LogFormat::Csv ? LogFormat::Csv : LogFormat::Ujson;
    out[artifact::certain_log(config.format)] = serialize_log(logs.certain, certain_format);
    out[artifact::uncertain_log(config.format)] = serialize_log(logs.uncertain, uncertain_format);
    out[artifact::kDfg] = to_dot(discover_dfg(logs.certain));

    std::vector<SegmentLabel> truth;
    if (config.truth) truth = load_labels(*config.truth);
    out[artifact::kMetrics] = metrics_json(videos, labeled, config.truth ? &truth : nullptr, config);
    return out;
}

}  // namespace vidlog
