#include "vidlog/dfg.hpp"

#include <sstream>

namespace vidlog {
namespace {

bool artificial(const std::string& node) {
    return node == DirectlyFollowsGraph::kStart || node == DirectlyFollowsGraph::kEnd;
}

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::size_t DirectlyFollowsGraph::activity_edge_total() const {
    std::size_t total = 0;
    for (const auto& [edge, count] : edges)
        if (!artificial(edge.first) && !artificial(edge.second)) total += count;
    return total;
}

DirectlyFollowsGraph discover_dfg(const EventLog& log) {
    DirectlyFollowsGraph g;
    for (const auto& trace : log.traces) {
        if (trace.events.empty()) continue;
        ++g.edges[{DirectlyFollowsGraph::kStart, trace.events.front().activity}];
        for (std::size_t i = 0; i < trace.events.size(); ++i) {
            g.activities.insert(trace.events[i].activity);
            if (i + 1 < trace.events.size()) ++g.edges[{trace.events[i].activity, trace.events[i + 1].activity}];
        }
        ++g.edges[{trace.events.back().activity, DirectlyFollowsGraph::kEnd}];
    }
    return g;
}

std::string to_dot(const DirectlyFollowsGraph& graph) {
    std::ostringstream os;
    os << "digraph dfg {\n"
       << "  rankdir=LR;\n"
       << "  node [shape=box, style=rounded];\n"
       << "  " << dot_quote(DirectlyFollowsGraph::kStart) << " [label=\"start\", shape=circle];\n"
       << "  " << dot_quote(DirectlyFollowsGraph::kEnd) << " [label=\"end\", shape=doublecircle];\n";
    for (const auto& a : graph.activities) os << "  " << dot_quote(a) << ";\n";
    for (const auto& [edge, count] : graph.edges)
        os << "  " << dot_quote(edge.first) << " -> " << dot_quote(edge.second) << " [label=\"" << count
           << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace vidlog
