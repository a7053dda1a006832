#pragma once

#include "qgraph/graph.hpp"

#include <string>

namespace qgraph {

// Parses the JSON graph format; throws InputError naming the offending field.
// The returned graph has passed validate_graph.
MetricGraph parse_graph_json(const std::string& text);
MetricGraph load_graph_file(const std::string& path);
std::string graph_to_json(const MetricGraph& g);

}  // namespace qgraph
