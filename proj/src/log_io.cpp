#include "vidlog/log_io.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "vidlog/errors.hpp"

namespace vidlog {
namespace {

constexpr const char* kCsvHeader = "case_id,activity,t_start,t_end,probability";

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string format_probability(double p) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, p);
    return std::string(buf, res.ptr);
}

double parse_probability(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw InputError("bad probability '" + s + "'");
    return v;
}

// Splits CSV text into records; handles quoted fields with embedded commas,
// quotes and newlines.
std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw InputError("unterminated quoted CSV field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

struct CsvRow {
    std::string case_id;
    std::string activity;
    Timestamp t_start;
    Timestamp t_end;
    double probability;
};

std::vector<CsvRow> parse_csv_rows(const std::string& text) {
    auto records = read_csv(text);
    if (records.empty()) throw InputError("CSV log has no header");
    std::ostringstream header;
    for (std::size_t i = 0; i < records[0].size(); ++i) header << (i ? "," : "") << records[0][i];
    if (header.str() != kCsvHeader) throw InputError("unexpected CSV header '" + header.str() + "'");
    std::vector<CsvRow> rows;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& f = records[r];
        if (f.size() != 5) throw InputError("CSV row " + std::to_string(r) + " does not have 5 fields");
        rows.push_back(CsvRow{f[0], f[1], parse_iso8601(f[2]), parse_iso8601(f[3]), parse_probability(f[4])});
    }
    return rows;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string write_xes(const EventLog& log) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<log xes.version=\"1.0\" xes.features=\"nested-attributes\" xmlns=\"http://www.xes-standard.org/\">\n"
       << "  <extension name=\"Concept\" prefix=\"concept\" uri=\"http://www.xes-standard.org/concept.xesext\"/>\n"
       << "  <extension name=\"Time\" prefix=\"time\" uri=\"http://www.xes-standard.org/time.xesext\"/>\n"
       << "  <extension name=\"Lifecycle\" prefix=\"lifecycle\" "
          "uri=\"http://www.xes-standard.org/lifecycle.xesext\"/>\n"
       << "  <global scope=\"event\">\n"
       << "    <string key=\"concept:name\" value=\"__INVALID__\"/>\n"
       << "    <string key=\"lifecycle:transition\" value=\"complete\"/>\n"
       << "  </global>\n";
    const auto emit = [&os](const std::string& name, const char* transition, Timestamp t) {
        os << "    <event>\n"
           << "      <string key=\"concept:name\" value=\"" << xml_escape(name) << "\"/>\n"
           << "      <string key=\"lifecycle:transition\" value=\"" << transition << "\"/>\n"
           << "      <date key=\"time:timestamp\" value=\"" << format_iso8601(t) << "\"/>\n"
           << "    </event>\n";
    };
    for (const auto& trace : log.traces) {
        os << "  <trace>\n"
           << "    <string key=\"concept:name\" value=\"" << xml_escape(trace.case_id) << "\"/>\n";
        for (const auto& e : trace.events) {
            emit(e.activity, "start", e.t_start);
            emit(e.activity, "complete", e.t_end);
        }
        os << "  </trace>\n";
    }
    os << "</log>\n";
    return os.str();
}

// Collects the key/value attributes directly under an XES element.
std::map<std::string, std::string> xes_attributes(const boost::property_tree::ptree& node) {
    std::map<std::string, std::string> attrs;
    for (const auto& [tag, child] : node) {
        if (tag == "<xmlattr>") continue;
        const auto key = child.get_optional<std::string>("<xmlattr>.key");
        const auto value = child.get_optional<std::string>("<xmlattr>.value");
        if (key && value) attrs[*key] = *value;
    }
    return attrs;
}

EventLog read_xes(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_xml(is, tree);
    } catch (const pt::xml_parser_error& e) {
        throw InputError(std::string("malformed XES: ") + e.what());
    }
    const auto root = tree.get_child_optional("log");
    if (!root) throw InputError("XES document has no <log> element");

    std::vector<Trace> traces;
    for (const auto& [tag, trace_node] : *root) {
        if (tag != "trace") continue;
        Trace trace;
        trace.case_id = xes_attributes(trace_node)["concept:name"];
        std::optional<Event> open;
        for (const auto& [etag, event_node] : trace_node) {
            if (etag != "event") continue;
            auto attrs = xes_attributes(event_node);
            const std::string& name = attrs["concept:name"];
            const std::string transition = attrs.count("lifecycle:transition") ? attrs["lifecycle:transition"]
                                                                                : "complete";
            if (!attrs.count("time:timestamp")) throw InputError("XES event without time:timestamp");
            const Timestamp t = parse_iso8601(attrs["time:timestamp"]);
            if (transition == "start") {
                if (open) throw InputError("XES start event while '" + open->activity + "' is still open");
                open = Event{name, t, t};
            } else if (transition == "complete") {
                if (open) {
                    if (open->activity != name) throw InputError("XES complete does not match open start");
                    open->t_end = t;
                    trace.events.push_back(std::move(*open));
                    open.reset();
                } else {
                    trace.events.push_back(Event{name, t, t});
                }
            }
        }
        if (open) throw InputError("XES trace ends with an unmatched start event");
        traces.push_back(std::move(trace));
    }
    return EventLog{std::move(traces)};
}

std::string write_ujson(const UncertainEventLog& log) {
    nlohmann::ordered_json doc;
    doc["meta"]["uncertainty_type"] = UncertainEventLog::kUncertaintyType;
    doc["traces"] = nlohmann::ordered_json::array();
    for (const auto& trace : log.traces) {
        nlohmann::ordered_json t;
        t["case_id"] = trace.case_id;
        t["events"] = nlohmann::ordered_json::array();
        for (const auto& e : trace.events) {
            nlohmann::ordered_json ev;
            ev["distribution"] = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < e.distribution.size(); ++i)
                ev["distribution"][e.distribution.labels[i]] = e.distribution.probabilities[i];
            ev["t_start"] = format_iso8601(e.t_start);
            ev["t_end"] = format_iso8601(e.t_end);
            t["events"].push_back(std::move(ev));
        }
        doc["traces"].push_back(std::move(t));
    }
    return doc.dump(2) + "\n";
}

UncertainEventLog read_ujson(const std::string& text) {
    try {
        const auto doc = nlohmann::ordered_json::parse(text);
        const auto type = doc.at("meta").at("uncertainty_type").get<std::string>();
        if (type != UncertainEventLog::kUncertaintyType)
            throw InputError("unsupported uncertainty type '" + type + "'");
        UncertainEventLog log;
        for (const auto& t : doc.at("traces")) {
            UncertainTrace trace;
            trace.case_id = t.at("case_id").get<std::string>();
            for (const auto& ev : t.at("events")) {
                UncertainEvent e;
                for (const auto& [label, p] : ev.at("distribution").items()) {
                    e.distribution.labels.push_back(label);
                    e.distribution.probabilities.push_back(p.get<double>());
                }
                e.t_start = parse_iso8601(ev.at("t_start").get<std::string>());
                e.t_end = parse_iso8601(ev.at("t_end").get<std::string>());
                trace.events.push_back(std::move(e));
            }
            log.traces.push_back(std::move(trace));
        }
        return log;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed ujson log: ") + e.what());
    }
}

}  // namespace

LogFormat parse_log_format(const std::string& text) {
    if (text == "csv") return LogFormat::Csv;
    if (text == "xes") return LogFormat::Xes;
    if (text == "ujson") return LogFormat::Ujson;
    throw UnsupportedFormat("unknown log format '" + text + "'");
}

std::string to_string(LogFormat format) {
    switch (format) {
        case LogFormat::Csv: return "csv";
        case LogFormat::Xes: return "xes";
        case LogFormat::Ujson: return "ujson";
    }
    return "?";
}

std::string serialize_log(const EventLog& log, LogFormat format) {
    switch (format) {
        case LogFormat::Csv: {
            std::ostringstream os;
            os << kCsvHeader << "\n";
            for (const auto& trace : log.traces)
                for (const auto& e : trace.events)
                    os << csv_field(trace.case_id) << ',' << csv_field(e.activity) << ','
                       << format_iso8601(e.t_start) << ',' << format_iso8601(e.t_end) << ",1.0\n";
            return os.str();
        }
        case LogFormat::Xes: return write_xes(log);
        case LogFormat::Ujson: break;
    }
    throw UnsupportedFormat("certain logs are written as csv or xes, not ujson");
}

std::string serialize_log(const UncertainEventLog& log, LogFormat format) {
    switch (format) {
        case LogFormat::Csv: {
            std::ostringstream os;
            os << kCsvHeader << "\n";
            for (const auto& trace : log.traces)
                for (const auto& e : trace.events)
                    for (std::size_t i = 0; i < e.distribution.size(); ++i)
                        os << csv_field(trace.case_id) << ',' << csv_field(e.distribution.labels[i]) << ','
                           << format_iso8601(e.t_start) << ',' << format_iso8601(e.t_end) << ','
                           << format_probability(e.distribution.probabilities[i]) << "\n";
            return os.str();
        }
        case LogFormat::Ujson: return write_ujson(log);
        case LogFormat::Xes: break;
    }
    throw UnsupportedFormat("xes cannot carry probabilistic labels; use ujson for uncertain logs");
}

EventLog parse_event_log(const std::string& text, LogFormat format) {
    switch (format) {
        case LogFormat::Csv: {
            EventLog log;
            for (auto& row : parse_csv_rows(text)) {
                if (log.traces.empty() || log.traces.back().case_id != row.case_id)
                    log.traces.push_back(Trace{row.case_id, {}});
                log.traces.back().events.push_back(Event{std::move(row.activity), row.t_start, row.t_end});
            }
            return log;
        }
        case LogFormat::Xes: return read_xes(text);
        case LogFormat::Ujson: break;
    }
    throw UnsupportedFormat("certain logs are read from csv or xes");
}

UncertainEventLog parse_uncertain_log(const std::string& text, LogFormat format) {
    switch (format) {
        case LogFormat::Csv: {
            UncertainEventLog log;
            for (auto& row : parse_csv_rows(text)) {
                if (log.traces.empty() || log.traces.back().case_id != row.case_id)
                    log.traces.push_back(UncertainTrace{row.case_id, {}});
                auto& events = log.traces.back().events;
                if (events.empty() || events.back().t_start != row.t_start || events.back().t_end != row.t_end)
                    events.push_back(UncertainEvent{{}, row.t_start, row.t_end});
                events.back().distribution.labels.push_back(std::move(row.activity));
                events.back().distribution.probabilities.push_back(row.probability);
            }
            return log;
        }
        case LogFormat::Ujson: return read_ujson(text);
        case LogFormat::Xes: break;
    }
    throw UnsupportedFormat("uncertain logs are read from csv or ujson");
}

}  // namespace vidlog
