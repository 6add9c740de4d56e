#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "vidlog/event_log.hpp"

namespace vidlog {

struct DirectlyFollowsGraph {
    // Artificial source and sink; activities never use these names.
    static constexpr const char* kStart = "__start__";
    static constexpr const char* kEnd = "__end__";

    std::set<std::string> activities;
    std::map<std::pair<std::string, std::string>, std::size_t> edges;

    // Sum of counts over edges between real activities.
    std::size_t activity_edge_total() const;
};

DirectlyFollowsGraph discover_dfg(const EventLog& log);

// Graphviz text; edge labels are counts.
std::string to_dot(const DirectlyFollowsGraph& graph);

}  // namespace vidlog
