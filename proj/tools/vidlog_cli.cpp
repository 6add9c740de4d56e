// vidlog: turns frame-embedding streams into timestamped event logs.
//
//   vidlog synth      --script 1:100,2:100 --seed 3 --out data/
//   vidlog run        --embeddings data/*.semb --train-embeddings held.semb --labels held.truth.json --out out/
//   vidlog segment | train-head | classify | log | dfg | eval   (the stages of `run`)
//
// Exit codes: 0 success, 2 missing or invalid input, 3 contradictory
// configuration. Artifacts are only written on success.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vidlog/artifacts.hpp"
#include "vidlog/errors.hpp"
#include "vidlog/eval.hpp"
#include "vidlog/pipeline.hpp"
#include "vidlog/timestamp.hpp"

namespace {

using vidlog::PipelineConfig;

constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
    s = trim(s);
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
        return s.substr(1, s.size() - 2);
    return s;
}

// Reads a key = value config file into "--key value..." tokens, skipping
// keys that were given on the command line (flags win over the file).
std::vector<std::string> config_tokens(const std::string& path, const std::vector<std::string>& given) {
    std::ifstream in(path);
    if (!in) throw vidlog::InputError("cannot open config file " + path);
    std::vector<std::string> tokens;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw vidlog::ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        const std::string flag = "--" + key;
        if (std::find(given.begin(), given.end(), flag) != given.end()) continue;
        const std::string value = trim(line.substr(eq + 1));
        tokens.push_back(flag);
        if (!value.empty() && value.front() == '[' && value.back() == ']') {
            std::stringstream items(value.substr(1, value.size() - 2));
            std::string item;
            while (std::getline(items, item, ','))
                if (!trim(item).empty()) tokens.push_back(unquote(item));
        } else {
            tokens.push_back(unquote(value));
        }
    }
    return tokens;
}

struct RawFlags {
    std::string clip_mode = "non-overlapping";
    std::string fps;
    std::string base_time;
    std::string format = "csv";
    std::string normalization = "max";
    std::string merge_centroid = "event-mean";
    std::string aggregation = "mean";
    std::string silhouette_space = "contextualized";
    std::string head, labels, segments, truth, log;
};

void add_paths(CLI::App* sub, PipelineConfig& c) {
    sub->add_option("--embeddings", c.embeddings, "Frame embedding files (.semb)");
    sub->add_option("--out", c.out, "Output directory");
}

void add_segmentation(CLI::App* sub, PipelineConfig& c, RawFlags& raw) {
    sub->add_option("--k", c.k, "Number of k-means clusters");
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--restarts", c.restarts, "k-means restarts");
    sub->add_option("--jobs", c.jobs, "Videos processed in parallel");
    sub->add_option("--normalization", raw.normalization, "Row scaling before softmax: max | sum");
    sub->add_option("--merge-centroid", raw.merge_centroid, "Merge distance centroid: event-mean | cluster");
}

void add_clips(CLI::App* sub, PipelineConfig& c, RawFlags& raw) {
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--clip-mode", raw.clip_mode, "non-overlapping | overlapping");
    sub->add_option("--clips-per-segment", c.clips_per_segment, "Clips sampled per segment");
    sub->add_option("--clip-embeddings", c.clip_embeddings, "Precomputed clip sets (.semb kind 1)");
    sub->add_option("--jobs", c.jobs, "Videos processed in parallel");
}

void add_training(CLI::App* sub, PipelineConfig& c, RawFlags& raw) {
    sub->add_option("--labels", raw.labels, "Labelled training segments (.labels.json)");
    sub->add_option("--train-embeddings", c.train_embeddings, "Embedding files of the labelled videos");
    sub->add_option("--lr", c.lr, "Learning rate");
    sub->add_option("--epochs", c.epochs, "Training epochs");
}

void add_clock(CLI::App* sub, RawFlags& raw) {
    sub->add_option("--fps", raw.fps, "Frame rate override, e.g. 25 or 30000/1001");
    sub->add_option("--base-time", raw.base_time, "Video start override, ISO-8601");
}

void add_logging(CLI::App* sub, PipelineConfig& c, RawFlags& raw) {
    sub->add_option("--top-k", c.top_k, "Labels kept per uncertain event");
    sub->add_option("--format", raw.format, "csv | xes | ujson");
}

void finalize(PipelineConfig& c, const RawFlags& raw) {
    c.clip_mode = vidlog::parse_clip_mode(raw.clip_mode);
    c.format = vidlog::parse_log_format(raw.format);
    c.aggregation = vidlog::parse_aggregation(raw.aggregation);
    if (raw.silhouette_space == "contextualized")
        c.silhouette_space = vidlog::SilhouetteSpace::Contextualized;
    else if (raw.silhouette_space == "raw")
        c.silhouette_space = vidlog::SilhouetteSpace::Raw;
    else
        throw vidlog::ConfigError("unknown silhouette space '" + raw.silhouette_space + "'");
    if (raw.normalization == "max")
        c.normalization = vidlog::RowNormalization::MaxAbs;
    else if (raw.normalization == "sum")
        c.normalization = vidlog::RowNormalization::Sum;
    else
        throw vidlog::ConfigError("unknown normalization '" + raw.normalization + "'");
    if (raw.merge_centroid == "event-mean")
        c.merge_centroid = vidlog::MergeCentroid::EventMean;
    else if (raw.merge_centroid == "cluster")
        c.merge_centroid = vidlog::MergeCentroid::ClusterCentroid;
    else
        throw vidlog::ConfigError("unknown merge centroid '" + raw.merge_centroid + "'");
    try {
        if (!raw.fps.empty()) c.fps = vidlog::Rational::parse(raw.fps);
    } catch (const std::invalid_argument& e) {
        throw vidlog::ConfigError(std::string("--fps: ") + e.what());
    }
    if (!raw.base_time.empty()) c.base_time = vidlog::to_epoch_seconds(vidlog::parse_iso8601(raw.base_time));
    if (!raw.head.empty()) c.head = raw.head;
    if (!raw.labels.empty()) c.labels = raw.labels;
    if (!raw.segments.empty()) c.segments = raw.segments;
    if (!raw.truth.empty()) c.truth = raw.truth;
    if (!raw.log.empty()) c.log = raw.log;
}

struct SynthFlags {
    std::string script;
    std::size_t dim = 32;
    double noise = 0.05;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> center_seed;
    double min_separation = 0.5;
    std::string video_id = "synthetic";
    std::string fps = "25";
    std::string base_time;
    std::string out = ".";
};

vidlog::ArtifactSet run_synth(const SynthFlags& f) {
    vidlog::SegmentScript script;
    std::stringstream items(f.script);
    std::string item;
    while (std::getline(items, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw vidlog::ConfigError("script entries are cluster:length");
        script.segments.push_back(
            {std::stoull(item.substr(0, colon)), std::stoull(item.substr(colon + 1))});
    }
    script.dim = f.dim;
    script.noise = f.noise;
    script.seed = f.seed;
    script.center_seed = f.center_seed;
    script.min_center_distance = f.min_separation;
    script.video_id = f.video_id;
    script.fps = vidlog::Rational::parse(f.fps);
    if (!f.base_time.empty()) script.base_time = vidlog::to_epoch_seconds(vidlog::parse_iso8601(f.base_time));

    const auto video = vidlog::synth_sequence(script);
    std::vector<vidlog::SegmentLabel> truth;
    std::size_t start = 0;
    for (const auto& s : script.segments) {
        truth.push_back({{script.video_id, start, start + s.length}, "activity_" + std::to_string(s.cluster_id)});
        start += s.length;
    }
    const auto bytes = vidlog::write_embeddings(video.sequence);
    return {{script.video_id + ".semb", std::string(bytes.begin(), bytes.end())},
            {script.video_id + ".truth.json", vidlog::labels_to_json(truth)}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Builds certain and uncertain event logs from video embedding streams"};
    app.require_subcommand(1);

    PipelineConfig config;
    RawFlags raw;
    SynthFlags synth;
    std::string config_path;

    auto* segment = app.add_subcommand("segment", "Cluster frames and merge them into event segments");
    add_paths(segment, config);
    add_segmentation(segment, config, raw);
    add_clock(segment, raw);

    auto* train = app.add_subcommand("train-head", "Train the few-shot classification head");
    add_paths(train, config);
    add_training(train, config, raw);
    add_clips(train, config, raw);

    auto* classify = app.add_subcommand("classify", "Attach label distributions to segments");
    add_paths(classify, config);
    add_clips(classify, config, raw);
    classify->add_option("--segments", raw.segments, "Segments file")->required();
    classify->add_option("--head", raw.head, "Head file (.head.json)")->required();
    classify->add_option("--aggregation", raw.aggregation, "Clip combination per segment: mean | vote | max");

    auto* log = app.add_subcommand("log", "Build certain and uncertain event logs");
    add_paths(log, config);
    add_clock(log, raw);
    add_logging(log, config, raw);
    log->add_option("--segments", raw.segments, "Labelled segments file")->required();

    auto* dfg = app.add_subcommand("dfg", "Discover a directly-follows graph from a certain log");
    dfg->add_option("--log", raw.log, "Certain log (.csv or .xes)")->required();
    dfg->add_option("--out", config.out, "Output directory");

    auto* eval = app.add_subcommand("eval", "Compute evaluation metrics");
    add_paths(eval, config);
    add_segmentation(eval, config, raw);
    add_clock(eval, raw);
    eval->add_option("--segments", raw.segments, "Segments file")->required();
    eval->add_option("--truth", raw.truth, "Ground-truth labels file");
    eval->add_option("--top-k", config.top_k, "Labels kept per uncertain event");
    eval->add_option("--clip-mode", raw.clip_mode, "Echoed into the report");
    eval->add_option("--clips-per-segment", config.clips_per_segment, "Echoed into the report");
    eval->add_option("--lr", config.lr, "Echoed into the report");
    eval->add_option("--epochs", config.epochs, "Echoed into the report");
    eval->add_option("--format", raw.format, "Echoed into the report");
    eval->add_option("--aggregation", raw.aggregation, "Echoed into the report");
    eval->add_option("--silhouette-space", raw.silhouette_space, "Silhouette points: contextualized | raw");

    auto* run = app.add_subcommand("run", "Segment, classify and log in one go");
    add_paths(run, config);
    add_segmentation(run, config, raw);
    add_training(run, config, raw);
    run->add_option("--clip-mode", raw.clip_mode, "non-overlapping | overlapping");
    run->add_option("--clips-per-segment", config.clips_per_segment, "Clips sampled per segment");
    run->add_option("--clip-embeddings", config.clip_embeddings, "Precomputed clip sets (.semb kind 1)");
    run->add_option("--head", raw.head, "Reuse a trained head instead of --labels");
    run->add_option("--truth", raw.truth, "Ground-truth labels for the metrics report");
    run->add_option("--aggregation", raw.aggregation, "Clip combination per segment: mean | vote | max");
    run->add_option("--silhouette-space", raw.silhouette_space, "Silhouette points: contextualized | raw");
    add_clock(run, raw);
    add_logging(run, config, raw);

    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic embedding stream with ground truth");
    synth_cmd->add_option("--script", synth.script, "Segments as cluster:length,...")->required();
    synth_cmd->add_option("--dim", synth.dim, "Embedding dimension");
    synth_cmd->add_option("--noise", synth.noise, "Gaussian noise sigma");
    synth_cmd->add_option("--seed", synth.seed, "Noise seed");
    synth_cmd->add_option("--center-seed", synth.center_seed, "Seed of the shared cluster centres");
    synth_cmd->add_option("--min-separation", synth.min_separation, "Minimum centre cosine distance");
    synth_cmd->add_option("--video-id", synth.video_id, "Video id written to the header");
    synth_cmd->add_option("--fps", synth.fps, "Frame rate");
    synth_cmd->add_option("--base-time", synth.base_time, "Video start, ISO-8601");
    synth_cmd->add_option("--out", synth.out, "Output directory");

    for (auto* sub : app.get_subcommands({})) sub->add_option("--config", config_path, "key = value config file");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        // Config values are spliced in right after the subcommand name.
        const auto it = std::find(args.begin(), args.end(), "--config");
        if (it != args.end() && it + 1 != args.end() && !args.empty()) {
            auto tokens = config_tokens(*(it + 1), args);
            args.insert(args.begin() + 1, tokens.begin(), tokens.end());
        }
    } catch (const vidlog::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const vidlog::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }

    std::reverse(args.begin(), args.end());  // CLI11 consumes the vector from the back
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        vidlog::ArtifactSet artifacts;
        std::filesystem::path out = config.out;
        if (synth_cmd->parsed()) {
            artifacts = run_synth(synth);
            out = synth.out;
        } else {
            finalize(config, raw);
            if (segment->parsed()) artifacts = vidlog::stage_segment(config);
            if (train->parsed()) artifacts = vidlog::stage_train_head(config);
            if (classify->parsed()) artifacts = vidlog::stage_classify(config);
            if (log->parsed()) artifacts = vidlog::stage_log(config);
            if (dfg->parsed()) artifacts = vidlog::stage_dfg(config);
            if (eval->parsed()) artifacts = vidlog::stage_eval(config);
            if (run->parsed()) artifacts = vidlog::run_pipeline(config);
        }
        vidlog::write_artifacts(out, artifacts);
        for (const auto& [name, content] : artifacts) std::cout << (out / name).string() << "\n";
        return 0;
    } catch (const vidlog::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const vidlog::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
