#include "mpnp/graph/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

namespace mpnp::graph {

Graph::Graph(std::size_t num_nodes, std::vector<Edge> edges) : num_nodes_(num_nodes) {
  for (auto& e : edges) {
    if (e.u >= num_nodes || e.v >= num_nodes)
      throw std::out_of_range("edge endpoint out of range: (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    if (e.u == e.v) throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("duplicate edge in graph");
  edges_ = std::move(edges);

  std::vector<std::size_t> degree(num_nodes, 0);
  for (const auto& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(num_nodes + 1, 0);
  for (std::size_t i = 0; i < num_nodes; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adjacency_.assign(offsets_.back(), 0);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[cursor[e.u]++] = e.v;
    adjacency_[cursor[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < num_nodes; ++i)
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
}

std::span<const NodeId> Graph::neighbors(std::size_t node) const {
  if (node >= num_nodes_) throw std::out_of_range("node id out of range");
  return {adjacency_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
}

bool Graph::has_edge(std::size_t u, std::size_t v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), static_cast<NodeId>(v));
}

void Graph::set_features(ad::Tensor features) {
  if (features.rank() != 2 || features.rows() != num_nodes_)
    throw std::invalid_argument("feature matrix must have one row per node, got " +
                                ad::shape_string(features.shape()));
  features_ = std::move(features);
}

void Graph::set_labels(std::vector<std::uint32_t> labels) {
  if (labels.size() != num_nodes_) throw std::invalid_argument("label count must equal node count");
  labels_ = std::move(labels);
}

void Graph::set_positions(Positions positions) {
  if (positions.dim == 0 || positions.coords.size() != positions.dim * num_nodes_)
    throw std::invalid_argument("position array does not match node count");
  positions_ = std::move(positions);
}

Graph Graph::permuted(std::span<const std::uint32_t> perm) const {
  if (perm.size() != num_nodes_) throw std::invalid_argument("permutation size mismatch");
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const auto& e : edges_) edges.push_back({perm[e.u], perm[e.v]});
  Graph out(num_nodes_, std::move(edges));
  if (!features_.empty()) {
    ad::Tensor f(features_.shape());
    for (std::size_t i = 0; i < num_nodes_; ++i)
      std::copy(features_.row(i).begin(), features_.row(i).end(), f.row(perm[i]).begin());
    out.features_ = std::move(f);
  }
  if (labels_) {
    std::vector<std::uint32_t> l(num_nodes_);
    for (std::size_t i = 0; i < num_nodes_; ++i) l[perm[i]] = (*labels_)[i];
    out.labels_ = std::move(l);
  }
  if (positions_) {
    Positions p{positions_->dim, std::vector<double>(positions_->coords.size())};
    for (std::size_t i = 0; i < num_nodes_; ++i)
      for (std::size_t d = 0; d < p.dim; ++d) p.coords[perm[i] * p.dim + d] = positions_->coords[i * p.dim + d];
    out.positions_ = std::move(p);
  }
  out.meta = meta;
  return out;
}

std::vector<NodeId> k_hop(const Graph& graph, std::span<const NodeId> seeds, std::size_t hops) {
  std::vector<std::size_t> dist(graph.num_nodes(), SIZE_MAX);
  std::deque<NodeId> frontier;
  for (NodeId s : seeds) {
    if (s >= graph.num_nodes()) throw std::out_of_range("k_hop: seed out of range");
    if (dist[s] == SIZE_MAX) {
      dist[s] = 0;
      frontier.push_back(s);
    }
  }
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    if (dist[u] == hops) continue;
    for (NodeId v : graph.neighbors(u)) {
      if (dist[v] != SIZE_MAX) continue;
      dist[v] = dist[u] + 1;
      frontier.push_back(v);
    }
  }
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist[i] != SIZE_MAX) out.push_back(static_cast<NodeId>(i));
  return out;
}

bool is_connected(const Graph& graph) {
  if (graph.num_nodes() == 0) return true;
  const NodeId seed = 0;
  return k_hop(graph, std::span(&seed, 1), graph.num_nodes()).size() == graph.num_nodes();
}

ad::Tensor one_hot_features(std::span<const std::uint32_t> states, std::size_t width) {
  ad::Tensor out({states.size(), width}, 0.0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] >= width) throw std::out_of_range("one_hot_features: state out of range");
    out(i, states[i]) = 1.0;
  }
  return out;
}

}  // namespace mpnp::graph
