#pragma once

#include <string>

#include "json.hpp"
#include "mpnp/graph/graph.hpp"

namespace mpnp::graph {

/// {"n", "edges", "x", "y", "pos", "meta"} in that order.
nlohmann::ordered_json to_json(const Graph& graph);
Graph graph_from_json(const nlohmann::ordered_json& record);

/// Single-line serialization of to_json().
std::string to_json_line(const Graph& graph);

}  // namespace mpnp::graph
