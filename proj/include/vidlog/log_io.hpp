#pragma once

#include <string>

#include "vidlog/event_log.hpp"

namespace vidlog {

enum class LogFormat { Csv, Xes, Ujson };

LogFormat parse_log_format(const std::string& text);
std::string to_string(LogFormat format);

// CSV: case_id,activity,t_start,t_end,probability (ISO-8601, millisecond
// precision). Certain logs write probability 1.0; uncertain logs write one row
// per (event, label). XES encodes each event as a start/complete pair and is
// certain-only. ujson is the uncertain-only JSON document.
// Unsupported combinations throw UnsupportedFormat.
std::string serialize_log(const EventLog& log, LogFormat format);
std::string serialize_log(const UncertainEventLog& log, LogFormat format);

EventLog parse_event_log(const std::string& text, LogFormat format);
UncertainEventLog parse_uncertain_log(const std::string& text, LogFormat format);

}  // namespace vidlog
