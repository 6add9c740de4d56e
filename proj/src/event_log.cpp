#include "vidlog/event_log.hpp"

#include <algorithm>

#include "vidlog/errors.hpp"

namespace vidlog {
namespace {

void check_segments(std::span<const EventSegment> segments) {
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (s.start_frame >= s.end_frame) throw InputError("segment with empty frame interval");
        if (i > 0 && s.start_frame < segments[i - 1].end_frame)
            throw InputError("segments are not chronological and disjoint");
        if (!s.label_distribution)
            throw MissingDistribution("segment [" + std::to_string(s.start_frame) + ", " +
                                      std::to_string(s.end_frame) + ") has no label distribution");
    }
}

template <typename EventT>
void check_events(const std::vector<EventT>& events, const std::string& case_id) {
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i].t_start > events[i].t_end)
            throw InputError("event ends before it starts in trace '" + case_id + "'");
        if (i > 0 && events[i].t_start <= events[i - 1].t_end)
            throw InputError("overlapping or unordered events in trace '" + case_id + "'");
    }
}

template <typename TraceT>
std::vector<TraceT> sorted_unique(std::vector<TraceT> traces) {
    std::stable_sort(traces.begin(), traces.end(),
                     [](const TraceT& a, const TraceT& b) { return a.case_id < b.case_id; });
    for (std::size_t i = 1; i < traces.size(); ++i)
        if (traces[i].case_id == traces[i - 1].case_id)
            throw InputError("duplicate case id '" + traces[i].case_id + "'");
    return traces;
}

}  // namespace

Trace to_certain_trace(std::span<const EventSegment> segments, const FrameClock& clock, std::string case_id) {
    check_segments(segments);
    Trace trace{std::move(case_id), {}};
    trace.events.reserve(segments.size());
    for (const auto& s : segments)
        trace.events.push_back(
            Event{s.label_distribution->most_likely(), clock.at(s.start_frame), clock.at(s.end_frame - 1)});
    validate_trace(trace);
    return trace;
}

UncertainTrace to_uncertain_trace(std::span<const EventSegment> segments, const FrameClock& clock,
                                  std::string case_id) {
    check_segments(segments);
    UncertainTrace trace{std::move(case_id), {}};
    trace.events.reserve(segments.size());
    for (const auto& s : segments)
        trace.events.push_back(
            UncertainEvent{*s.label_distribution, clock.at(s.start_frame), clock.at(s.end_frame - 1)});
    validate_trace(trace);
    return trace;
}

Trace argmax_projection(const UncertainTrace& trace) {
    Trace out{trace.case_id, {}};
    for (const auto& e : trace.events) out.events.push_back(Event{e.distribution.most_likely(), e.t_start, e.t_end});
    return out;
}

UncertainTrace truncate_trace_topk(const UncertainTrace& trace, std::size_t k) {
    UncertainTrace out{trace.case_id, {}};
    for (const auto& e : trace.events)
        out.events.push_back(UncertainEvent{truncate_topk(e.distribution, k), e.t_start, e.t_end});
    return out;
}

void validate_trace(const Trace& trace) { check_events(trace.events, trace.case_id); }

void validate_trace(const UncertainTrace& trace) {
    check_events(trace.events, trace.case_id);
    for (const auto& e : trace.events) e.distribution.validate();
}

EventLog make_log(std::vector<Trace> traces) { return EventLog{sorted_unique(std::move(traces))}; }

UncertainEventLog make_log(std::vector<UncertainTrace> traces) {
    return UncertainEventLog{sorted_unique(std::move(traces))};
}

}  // namespace vidlog
