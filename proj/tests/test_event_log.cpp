#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vidlog/errors.hpp"
#include "vidlog/event_log.hpp"

using namespace vidlog;
using std::chrono::milliseconds;

namespace {

EventSegment labeled(std::size_t start, std::size_t end, LabelDistribution dist) {
    EventSegment e;
    e.start_frame = start;
    e.end_frame = end;
    e.cluster_id = 1;
    e.label_distribution = std::move(dist);
    return e;
}

Timestamp at_ms(long long ms) { return Timestamp(milliseconds(ms)); }

}  // namespace

TEST_CASE("the most likely label becomes the activity") {
    const FrameClock clock(Rational(10), 0.0);
    const std::vector<EventSegment> segs = {labeled(0, 50, {{"bake", "mix"}, {0.7, 0.3}})};
    const auto trace = to_certain_trace(segs, clock, "case");
    REQUIRE(trace.events.size() == 1);
    CHECK(trace.events[0].activity == "bake");
    CHECK(trace.events[0].t_start == at_ms(0));
    CHECK(trace.events[0].t_end == at_ms(4900));
}

TEST_CASE("ties go to the label that sorts first") {
    const FrameClock clock(Rational(10), 0.0);
    const std::vector<EventSegment> segs = {labeled(0, 5, {{"b", "a"}, {0.5, 0.5}})};
    CHECK(to_certain_trace(segs, clock, "c").events[0].activity == "a");
}

TEST_CASE("segments without a distribution cannot become events") {
    const FrameClock clock(Rational(10), 0.0);
    EventSegment bare;
    bare.end_frame = 3;
    const std::vector<EventSegment> segs = {bare};
    CHECK_THROWS_AS(to_certain_trace(segs, clock, "c"), MissingDistribution);
    CHECK_THROWS_AS(to_uncertain_trace(segs, clock, "c"), MissingDistribution);
}

TEST_CASE("uncertain traces keep distributions and project back to the certain trace") {
    const FrameClock clock(Rational(30000, 1001), 1700000000.0);
    const std::vector<EventSegment> segs = {labeled(0, 40, {{"a", "b", "c"}, {0.2, 0.5, 0.3}}),
                                            labeled(40, 41, {{"a", "b", "c"}, {0.6, 0.2, 0.2}}),
                                            labeled(41, 90, {{"a", "b", "c"}, {0.1, 0.1, 0.8}})};
    const auto u = to_uncertain_trace(segs, clock, "v");
    const auto c = to_certain_trace(segs, clock, "v");
    CHECK(argmax_projection(u) == c);
    for (const auto& e : u.events) e.distribution.validate();
    validate_trace(c);
    validate_trace(u);
    // a one-frame event is an instant
    CHECK(c.events[1].t_start == c.events[1].t_end);
}

TEST_CASE("top-k truncation renormalizes by the retained mass") {
    const LabelDistribution d{{"w", "x", "y", "z"}, {0.5, 0.3, 0.1, 0.1}};
    const auto t = truncate_topk(d, 3);
    REQUIRE(t.size() == 3);
    CHECK(t.labels == std::vector<std::string>{"w", "x", "y"});
    CHECK(t.probabilities[0] == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
    CHECK(t.probabilities[1] == doctest::Approx(3.0 / 9.0).epsilon(1e-12));
    CHECK(t.probabilities[2] == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    CHECK(truncate_topk(d, 4) == d);
    const LabelDistribution hot{{"a", "b", "c"}, {0.0, 1.0, 0.0}};
    CHECK(truncate_topk(hot, 1).labels == std::vector<std::string>{"b"});
    CHECK(truncate_topk(hot, 1).probabilities == std::vector<double>{1.0});
}

TEST_CASE("overlapping or unordered events fail validation") {
    Trace t{"c", {{"a", at_ms(0), at_ms(100)}, {"b", at_ms(100), at_ms(200)}}};
    CHECK_THROWS_AS(validate_trace(t), InputError);
    t.events[1].t_start = at_ms(101);
    CHECK_NOTHROW(validate_trace(t));
    t.events[0].t_end = at_ms(-1);
    CHECK_THROWS_AS(validate_trace(t), InputError);
}

TEST_CASE("logs sort by case id and refuse duplicates") {
    const auto log = make_log(std::vector<Trace>{{"b", {}}, {"a", {}}});
    CHECK(log.traces[0].case_id == "a");
    CHECK_THROWS_AS(make_log(std::vector<Trace>{{"a", {}}, {"a", {}}}), InputError);
}

TEST_CASE("frame clock maps frames to milliseconds") {
    const FrameClock clock(Rational(30000, 1001), 0.0);
    CHECK(clock.at(30).time_since_epoch().count() == 1001);
    CHECK(clock.at(1).time_since_epoch().count() == 33);
    CHECK_THROWS_AS(FrameClock(Rational(2000), 0.0), ConfigError);
    CHECK_THROWS_AS(FrameClock(Rational(0), 0.0), ConfigError);
}

TEST_CASE("ISO-8601 timestamps round-trip at millisecond precision") {
    const auto t = timestamp_from_seconds(1700000000.123);
    CHECK(format_iso8601(t) == "2023-11-14T22:13:20.123Z");
    CHECK(parse_iso8601(format_iso8601(t)) == t);
    CHECK(parse_iso8601("2023-11-14T23:13:20.123+01:00") == t);
    CHECK(parse_iso8601("2023-11-14T22:13:20.1234") == t);
    CHECK(format_iso8601(at_ms(-1)) == "1969-12-31T23:59:59.999Z");
    CHECK_THROWS_AS(parse_iso8601("yesterday"), InputError);
}
