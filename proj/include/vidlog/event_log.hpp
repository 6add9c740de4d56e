#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vidlog/distribution.hpp"
#include "vidlog/segmentation.hpp"
#include "vidlog/timestamp.hpp"

namespace vidlog {

struct Event {
    std::string activity;
    Timestamp t_start;
    Timestamp t_end;

    friend bool operator==(const Event&, const Event&) = default;
};

struct UncertainEvent {
    LabelDistribution distribution;
    Timestamp t_start;
    Timestamp t_end;

    friend bool operator==(const UncertainEvent&, const UncertainEvent&) = default;
};

struct Trace {
    std::string case_id;
    std::vector<Event> events;

    friend bool operator==(const Trace&, const Trace&) = default;
};

struct UncertainTrace {
    std::string case_id;
    std::vector<UncertainEvent> events;

    friend bool operator==(const UncertainTrace&, const UncertainTrace&) = default;
};

// Traces are kept in case_id order; case ids are unique within a log.
struct EventLog {
    std::vector<Trace> traces;

    friend bool operator==(const EventLog&, const EventLog&) = default;
};

// Probabilistic activity labels with certain, totally ordered timestamps.
struct UncertainEventLog {
    static constexpr const char* kUncertaintyType = "[A]_W";
    std::vector<UncertainTrace> traces;

    friend bool operator==(const UncertainEventLog&, const UncertainEventLog&) = default;
};

// One event per labelled segment: activity = argmax of the distribution,
// t_start = t(start_frame), t_end = t(end_frame - 1). Throws
// MissingDistribution when a segment carries no distribution.
Trace to_certain_trace(std::span<const EventSegment> segments, const FrameClock& clock, std::string case_id);
UncertainTrace to_uncertain_trace(std::span<const EventSegment> segments, const FrameClock& clock,
                                  std::string case_id);

Trace argmax_projection(const UncertainTrace& trace);
UncertainTrace truncate_trace_topk(const UncertainTrace& trace, std::size_t k);

// Throws InputError unless events are chronological with pairwise disjoint
// intervals and each has t_start <= t_end.
void validate_trace(const Trace& trace);
void validate_trace(const UncertainTrace& trace);

// Sorts traces by case_id and rejects duplicates.
EventLog make_log(std::vector<Trace> traces);
UncertainEventLog make_log(std::vector<UncertainTrace> traces);

}  // namespace vidlog
