// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "fixture.hpp"
#include "oracles.hpp"
#include "vidlog/dfg.hpp"
#include "vidlog/errors.hpp"
#include "vidlog/event_log.hpp"
#include "vidlog/fewshot.hpp"
#include "vidlog/kmeans.hpp"
#include "vidlog/log_io.hpp"
#include "vidlog/segmentation.hpp"
#include "vidlog/similarity.hpp"

using namespace vidlog;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome segmentation_recovery() {
    std::size_t good = 0;
    double slowest = 0.0;
    std::ostringstream accs;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SegmentScript script;
        for (std::size_t c = 1; c <= 6; ++c) script.segments.push_back({c, 100});
        script.dim = 32;
        script.noise = 0.05;
        script.min_center_distance = 0.5;
        script.seed = seed;
        const auto video = synth_sequence(script);
        const auto t0 = Clock::now();
        const auto segments = segment_video(video.sequence, 6, seed);
        slowest = std::max(slowest, seconds_since(t0));
        const double acc = frame_accuracy(segments, video.truth);
        accs << (seed > 1 ? "," : "") << std::round(acc * 1000) / 1000;
        if (acc >= 0.95) ++good;
    }
    std::ostringstream d;
    d << good << "/10 seeds >= 0.95 [" << accs.str() << "], slowest run " << slowest << " s";
    return {good >= 9 && slowest < 5.0, d.str()};
}

// ---------------------------------------------------------------------------

EventSegment ev(std::size_t start, std::size_t end, std::size_t cluster, std::vector<double> centroid) {
    EventSegment e;
    e.start_frame = start;
    e.end_frame = end;
    e.cluster_id = cluster;
    e.centroid = std::move(centroid);
    return e;
}

bool same_spans(const std::vector<EventSegment>& out,
                const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>& expect) {
    if (out.size() != expect.size()) return false;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto [s, e, c] = expect[i];
        if (out[i].start_frame != s || out[i].end_frame != e || out[i].cluster_id != c) return false;
    }
    return true;
}

Outcome merge_contract() {
    std::mt19937_64 gen(20240601);
    std::uniform_real_distribution<double> unit;
    std::size_t violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + gen() % 40;
        std::vector<EventSegment> events;
        std::size_t t = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t len = 1 + gen() % 50;
            std::size_t c = 1 + gen() % 7;
            if (i > 0 && c == events.back().cluster_id) c = c % 7 + 1;
            std::vector<double> centroid(3);
            for (auto& v : centroid) v = unit(gen);
            events.push_back(ev(t, t + len, c, centroid));
            t += len;
        }
        std::vector<std::size_t> lengths;
        for (const auto& e : events) lengths.push_back(e.length());
        const auto l_min = min_event_length(t, lengths);
        const auto mode = trial % 2 ? MergeCentroid::ClusterCentroid : MergeCentroid::EventMean;
        const auto out = merge_events(events, l_min, mode);

        bool ok = !out.empty() && out.front().start_frame == 0 && out.back().end_frame == t;
        for (std::size_t i = 0; ok && i < out.size(); ++i) {
            ok = out[i].start_frame < out[i].end_frame && (i == 0 || out[i].start_frame == out[i - 1].end_frame);
            if (out.size() > 1) ok = ok && Rational(static_cast<std::int64_t>(out[i].length())) >= l_min;
        }
        if (!ok) ++violations;
    }

    const bool single = same_spans(merge_events({ev(0, 2, 1, {0.0}), ev(2, 10, 2, {1.0})}, Rational(3)), {{0, 10, 2}});
    const bool shared = same_spans(
        merge_events({ev(0, 5, 4, {0.0}), ev(5, 7, 2, {9.0}), ev(7, 12, 4, {0.0})}, Rational(3)), {{0, 12, 4}});
    const bool tie = same_spans(
        merge_events({ev(0, 5, 1, {0.0}), ev(5, 6, 2, {1.0}), ev(6, 11, 3, {2.0})}, Rational(3)),
        {{0, 6, 1}, {6, 11, 3}});

    std::ostringstream d;
    d << violations << " violations in 1000 random lists; fixtures single-neighbour=" << single
      << " shared-cluster=" << shared << " tie-to-preceding=" << tie;
    return {violations == 0 && single && shared && tie, d.str()};
}

// ---------------------------------------------------------------------------

Outcome lmin_formula() {
    std::mt19937_64 gen(77);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::size_t> lengths(1 + gen() % 30);
        for (auto& l : lengths) l = 1 + gen() % 200;
        const std::int64_t total = std::accumulate(lengths.begin(), lengths.end(), std::int64_t{0});
        const std::int64_t n = static_cast<std::int64_t>(lengths.size());
        // l_avg = total / n, total / l_avg = total * n / total, then l_min = total / floor(that)
        const std::int64_t q = (total * n) / total;
        const std::int64_t g = std::gcd(total, q);
        const auto got = min_event_length(static_cast<std::size_t>(total), lengths);
        if (got.num() != total / g || got.den() != q / g) ++mismatches;
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatches in 1000 multisets"};
}

// ---------------------------------------------------------------------------

Outcome kmeans_oracle() {
    std::mt19937_64 gen(31337);
    std::size_t optimal = 0, increasing = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + gen() % 7;  // T <= 8
        const std::size_t k = 1 + gen() % std::min<std::size_t>(3, n);
        const std::size_t dim = 1 + gen() % 4;
        const auto inst = oracle::separated_instance(gen, n, k, dim, 1.0, 5.0);
        Matrix pts(n, dim);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < dim; ++j) pts(i, j) = inst.points[i][j];
        KMeansOptions opt;
        opt.k = k;
        opt.seed = static_cast<std::uint64_t>(trial);
        opt.restarts = 10;
        const auto rep = kmeans_cluster_report(pts, opt);
        const double best = oracle::best_partition(inst.points, k).wcss;
        if (std::abs(rep.best.wcss - best) <= 1e-9 * std::max(1.0, best)) ++optimal;
        for (const auto& trace : rep.wcss_traces)
            for (std::size_t i = 1; i < trace.size(); ++i)
                if (trace[i] > trace[i - 1] * (1 + 1e-12)) ++increasing;
    }
    std::ostringstream d;
    d << optimal << "/100 at the exhaustive optimum, " << increasing << " WCSS increases";
    return {optimal == 100 && increasing == 0, d.str()};
}

// ---------------------------------------------------------------------------

Outcome contextualize_props() {
    std::mt19937_64 gen(4711);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    double worst_row = 0, worst_sym = 0, worst_diag = 0, worst_scale = 0;
    std::size_t bad_shape = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + gen() % 60, d = 1 + gen() % 48;
        FrameEmbeddingSequence seq;
        seq.video_id = "p";
        seq.frames = n;
        seq.dim = d;
        Matrix z(n, d);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                const float v = static_cast<float>(normal(gen));
                seq.data.push_back(v);
                z(i, j) = v;
            }
            if (std::all_of(seq.data.end() - static_cast<long>(d), seq.data.end(), [](float v) { return v == 0; })) {
                seq.data.back() = 1.0f;
                z(i, d - 1) = 1.0;
            }
        }
        const auto dist = cosine_distance_matrix(seq);
        for (std::size_t i = 0; i < n; ++i) {
            worst_diag = std::max(worst_diag, std::abs(dist.values(i, i)));
            for (std::size_t j = 0; j < n; ++j)
                worst_sym = std::max(worst_sym, std::abs(dist.values(i, j) - dist.values(j, i)));
        }
        const auto c = contextualize(dist);
        if (c.rows.rows() != n + 1 || c.rows.cols() != n) ++bad_shape;
        for (std::size_t r = 0; r < c.rows.rows(); ++r) {
            const auto row = c.rows.row(r);
            worst_row = std::max(worst_row, std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0));
        }

        Matrix scaled = z;
        const double s = scale(gen);
        for (auto& v : scaled.data()) v *= s;
        const auto a = contextualize(cosine_distance_matrix(z));
        const auto b = contextualize(cosine_distance_matrix(scaled));
        for (std::size_t i = 0; i < a.rows.data().size(); ++i)
            worst_scale = std::max(worst_scale, std::abs(a.rows.data()[i] - b.rows.data()[i]));
    }
    std::ostringstream d;
    d << "max |row sum - 1| " << worst_row << ", asymmetry " << worst_sym << ", max |d_ii| " << worst_diag
      << ", scaling drift " << worst_scale << ", shape errors " << bad_shape;
    return {worst_row <= 1e-9 && worst_sym <= 1e-9 && worst_diag <= 1e-7 && worst_scale <= 1e-9 && bad_shape == 0,
            d.str()};
}

// ---------------------------------------------------------------------------

Outcome gradient_check() {
    std::mt19937_64 gen(99991);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = 2 + gen() % 10, m = 2 + gen() % 6, n = 1 + gen() % 20;
        std::vector<std::string> labels;
        for (std::size_t a = 0; a < m; ++a) labels.push_back("c" + std::to_string(a));
        Matrix w(d, m);
        for (auto& v : w.data()) v = 0.5 * normal(gen);
        const LinearHead head(labels, w);
        std::vector<LabeledClip> batch;
        oracle::Points z;
        std::vector<std::size_t> y;
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<double> e(d);
            for (auto& v : e) v = normal(gen);
            const std::size_t cls = gen() % m;
            batch.push_back({e, labels[cls]});
            z.push_back(e);
            y.push_back(cls);
        }
        const auto g = cross_entropy_gradient(head, batch);
        const auto num =
            oracle::numeric_gradient({w.data().begin(), w.data().end()}, d, m, z, y, 1e-5);
        for (std::size_t i = 0; i < num.size(); ++i) {
            const double denom = std::max({std::abs(g.data()[i]), std::abs(num[i]), 1e-12});
            worst = std::max(worst, std::abs(g.data()[i] - num[i]) / denom);
        }
    }
    std::ostringstream d;
    d << "max relative error " << worst << " over 10 (head, batch) pairs";
    return {worst <= 1e-6, d.str()};
}

// ---------------------------------------------------------------------------

Outcome fewshot_head() {
    std::mt19937_64 gen(555);
    std::normal_distribution<double> normal;
    const std::size_t m = 5, per_class = 20, d = 32;
    std::vector<std::vector<double>> centers(m, std::vector<double>(d));
    for (auto& c : centers) {
        double norm = 0;
        for (auto& v : c) {
            v = normal(gen);
            norm += v * v;
        }
        for (auto& v : c) v /= std::sqrt(norm);
    }
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < m; ++a) labels.push_back("activity_" + std::to_string(a + 1));
    std::vector<LabeledClip> clips;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t i = 0; i < per_class; ++i) {
            std::vector<double> z = centers[a];
            for (auto& v : z) v += 0.05 * normal(gen);
            clips.push_back({z, labels[a]});
        }
    const auto trained = train_head(clips, labels, 0.01, 10);
    std::vector<LabelDistribution> preds;
    std::vector<std::string> truths;
    for (const auto& c : clips) {
        preds.push_back(predict_clip(trained.head, c.embedding));
        truths.push_back(c.label);
    }
    const double top1 = top_k_accuracy(preds, truths, 1);
    const double top3 = top_k_accuracy(preds, truths, 3);
    const double first = trained.loss_trace.front(), last = trained.loss_trace.back();
    std::ostringstream out;
    out << "top1 " << top1 << ", top3 " << top3 << ", loss " << first << " -> " << last;
    return {top1 >= 0.99 && top3 == 1.0 && last < first && trained.loss_trace.size() == 11, out.str()};
}

// ---------------------------------------------------------------------------

LabelDistribution random_distribution(std::mt19937_64& gen, const std::vector<std::string>& labels) {
    std::exponential_distribution<double> expo;
    LabelDistribution dist{labels, {}};
    double sum = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        dist.probabilities.push_back(expo(gen));
        sum += dist.probabilities.back();
    }
    for (auto& p : dist.probabilities) p /= sum;
    return dist;
}

std::vector<EventSegment> random_labeled_segments(std::mt19937_64& gen, const std::vector<std::string>& labels) {
    std::vector<EventSegment> segs;
    std::size_t t = 0;
    for (std::size_t i = 0, n = 1 + gen() % 12; i < n; ++i) {
        const std::size_t len = 1 + gen() % 120;
        EventSegment e = ev(t, t + len, 1 + gen() % 5, {});
        e.label_distribution = random_distribution(gen, labels);
        segs.push_back(std::move(e));
        t += len;
    }
    return segs;
}

const std::vector<Rational>& frame_rates() {
    static const std::vector<Rational> r = {Rational(25), Rational(30000, 1001), Rational(10), Rational(60),
                                            Rational(24000, 1001)};
    return r;
}

bool chronological_disjoint(const std::vector<std::pair<Timestamp, Timestamp>>& spans) {
    for (std::size_t i = 0; i < spans.size(); ++i) {
        if (spans[i].first > spans[i].second) return false;
        if (i > 0 && spans[i].first <= spans[i - 1].second) return false;
    }
    return true;
}

Outcome log_consistency() {
    std::mt19937_64 gen(8080);
    std::size_t projection = 0, mass = 0, order = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::string> labels;
        for (std::size_t a = 0, m = 2 + gen() % 6; a < m; ++a) labels.push_back("act" + std::to_string(a));
        const auto segs = random_labeled_segments(gen, labels);
        const FrameClock clock(frame_rates()[gen() % frame_rates().size()],
                               1.6e9 + static_cast<double>(gen() % 100000000) / 7.0);
        const auto certain = to_certain_trace(segs, clock, "case");
        const auto uncertain = to_uncertain_trace(segs, clock, "case");
        if (!(argmax_projection(uncertain) == certain)) ++projection;
        const auto truncated = truncate_trace_topk(uncertain, 3);
        for (const auto* tr : {&uncertain, &truncated})
            for (const auto& e : tr->events) {
                const double s = std::accumulate(e.distribution.probabilities.begin(),
                                                 e.distribution.probabilities.end(), 0.0);
                if (std::abs(s - 1.0) > 1e-9) ++mass;
            }
        std::vector<std::pair<Timestamp, Timestamp>> a, b;
        for (const auto& e : certain.events) a.emplace_back(e.t_start, e.t_end);
        for (const auto& e : uncertain.events) b.emplace_back(e.t_start, e.t_end);
        if (!chronological_disjoint(a) || !chronological_disjoint(b)) ++order;
    }
    std::ostringstream d;
    d << "projection mismatches " << projection << ", mass errors " << mass << ", ordering errors " << order;
    return {projection == 0 && mass == 0 && order == 0, d.str()};
}

// ---------------------------------------------------------------------------

Outcome serialization() {
    std::mt19937_64 gen(1234);
    std::size_t csv = 0, ujson = 0, ucsv = 0, xes = 0, dfg = 0;
    const std::vector<std::string> names = {"mix", "bake", "cut, chop", "pour \"milk\"", "a&b<c>"};
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Trace> certain;
        std::vector<UncertainTrace> uncertain;
        std::size_t expected_edges = 0;
        for (std::size_t c = 0, n = 1 + gen() % 6; c < n; ++c) {
            std::vector<std::string> labels(names.begin(), names.begin() + static_cast<long>(2 + gen() % 4));
            const auto segs = random_labeled_segments(gen, labels);
            const FrameClock clock(frame_rates()[gen() % frame_rates().size()],
                                   1.6e9 + static_cast<double>(gen() % 1000000));
            const std::string id = "video " + std::to_string(c);
            certain.push_back(to_certain_trace(segs, clock, id));
            uncertain.push_back(truncate_trace_topk(to_uncertain_trace(segs, clock, id), 3));
            expected_edges += segs.size() - 1;
        }
        const auto log = make_log(certain);
        const auto ulog = make_log(uncertain);
        if (!(parse_event_log(serialize_log(log, LogFormat::Csv), LogFormat::Csv) == log)) ++csv;
        if (!(parse_uncertain_log(serialize_log(ulog, LogFormat::Ujson), LogFormat::Ujson) == ulog)) ++ujson;
        if (!(parse_uncertain_log(serialize_log(ulog, LogFormat::Csv), LogFormat::Csv) == ulog)) ++ucsv;

        const auto back = parse_event_log(serialize_log(log, LogFormat::Xes), LogFormat::Xes);
        bool triples = back.traces.size() == log.traces.size();
        for (std::size_t t = 0; triples && t < log.traces.size(); ++t) {
            const auto& x = log.traces[t].events;
            const auto& y = back.traces[t].events;
            triples = x.size() == y.size();
            for (std::size_t e = 0; triples && e < x.size(); ++e)
                triples = x[e].activity == y[e].activity && x[e].t_start == y[e].t_start && x[e].t_end == y[e].t_end;
        }
        if (!triples) ++xes;
        if (discover_dfg(log).activity_edge_total() != expected_edges) ++dfg;
    }
    std::ostringstream d;
    d << "failures: csv " << csv << ", ujson " << ujson << ", uncertain csv " << ucsv << ", xes " << xes
      << ", dfg conservation " << dfg << " (100 logs each)";
    return {csv + ujson + ucsv + xes + dfg == 0, d.str()};
}

// ---------------------------------------------------------------------------

int run_cli(const std::string& args) {
    const std::string cmd = std::string(VIDLOG_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome end_to_end() {
    const auto root = fs::temp_directory_path() / ("vidlog_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const auto files = fixture::write(root / "fixture");
    std::string inputs;
    for (const auto& p : files.embeddings) inputs += " " + p.string();
    const auto args = [&](const fs::path& out) {
        return "run --embeddings" + inputs + " --train-embeddings " + files.train_embeddings.string() +
               " --labels " + files.train_labels.string() + " --truth " + files.truth.string() +
               " --k 3 --seed 11 --out " + out.string();
    };
    double slowest = 0.0;
    int codes = 0;
    for (const char* name : {"first", "second"}) {
        const auto t0 = Clock::now();
        codes |= run_cli(args(root / name));
        slowest = std::max(slowest, seconds_since(t0));
    }
    std::size_t compared = 0, differing = 0;
    if (codes == 0) {
        for (const auto& entry : fs::directory_iterator(root / "first")) {
            ++compared;
            const auto other = root / "second" / entry.path().filename();
            if (!fs::exists(other) || read_text_file(entry.path()) != read_text_file(other)) ++differing;
        }
    }
    fs::remove_all(root);
    std::ostringstream d;
    d << compared << " artifacts compared, " << differing << " differ, slowest run " << slowest << " s";
    return {codes == 0 && compared >= 7 && differing == 0 && slowest < 60.0, d.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"segmentation-recovery", segmentation_recovery},
        {"merge-contract", merge_contract},
        {"lmin-formula", lmin_formula},
        {"kmeans-oracle", kmeans_oracle},
        {"contextualize", contextualize_props},
        {"gradient-check", gradient_check},
        {"fewshot-head", fewshot_head},
        {"log-consistency", log_consistency},
        {"serialization", serialization},
        {"end-to-end-determinism", end_to_end},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
