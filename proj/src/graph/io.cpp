#include "mpnp/graph/io.hpp"

#include <stdexcept>

namespace mpnp::graph {

nlohmann::ordered_json to_json(const Graph& graph) {
  using json = nlohmann::ordered_json;
  json record = json::object();
  record["n"] = graph.num_nodes();
  json edges = json::array();
  for (const auto& e : graph.edges()) edges.push_back(json::array({e.u, e.v}));
  record["edges"] = std::move(edges);
  json x = json::array();
  const auto& f = graph.features();
  if (!f.empty())
    for (std::size_t i = 0; i < f.rows(); ++i) {
      json row = json::array();
      for (double v : f.row(i)) row.push_back(v);
      x.push_back(std::move(row));
    }
  record["x"] = std::move(x);
  record["y"] = graph.labels() ? json(*graph.labels()) : json(nullptr);
  if (const auto& pos = graph.positions()) {
    json rows = json::array();
    for (std::size_t i = 0; i < graph.num_nodes(); ++i) {
      auto p = pos->at(i);
      rows.push_back(json(std::vector<double>(p.begin(), p.end())));
    }
    record["pos"] = std::move(rows);
  } else {
    record["pos"] = nullptr;
  }
  record["meta"] = graph.meta;
  return record;
}

Graph graph_from_json(const nlohmann::ordered_json& record) {
  const std::size_t n = record.at("n").get<std::size_t>();
  std::vector<Edge> edges;
  for (const auto& e : record.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("graph record: malformed edge");
    edges.push_back({e[0].get<NodeId>(), e[1].get<NodeId>()});
  }
  Graph g(n, std::move(edges));
  const auto& x = record.at("x");
  if (!x.empty()) {
    if (x.size() != n) throw std::invalid_argument("graph record: feature row count differs from n");
    const std::size_t d = x[0].size();
    ad::Tensor f({n, d});
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i].size() != d) throw std::invalid_argument("graph record: ragged feature rows");
      for (std::size_t j = 0; j < d; ++j) f(i, j) = x[i][j].get<double>();
    }
    g.set_features(std::move(f));
  }
  if (record.contains("y") && !record["y"].is_null()) g.set_labels(record["y"].get<std::vector<std::uint32_t>>());
  if (record.contains("pos") && !record["pos"].is_null()) {
    const auto& rows = record["pos"];
    Positions pos{rows.empty() ? 0 : rows[0].size(), {}};
    for (const auto& row : rows)
      for (const auto& v : row) pos.coords.push_back(v.get<double>());
    g.set_positions(std::move(pos));
  }
  if (record.contains("meta")) g.meta = record["meta"];
  return g;
}

std::string to_json_line(const Graph& graph) { return to_json(graph).dump(); }

}  // namespace mpnp::graph
