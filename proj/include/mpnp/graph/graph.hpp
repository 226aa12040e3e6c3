#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "mpnp/autodiff/tensor.hpp"

namespace mpnp::graph {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;  // u < v
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Node coordinates (2-D for planar layouts, 3-D for spherical ones).
struct Positions {
  std::size_t dim = 0;
  std::vector<double> coords;  // row-major, num_nodes * dim

  std::span<const double> at(std::size_t node) const { return {coords.data() + node * dim, dim}; }
};

/// Undirected simple graph with CSR neighbor lists and optional node data.
class Graph {
 public:
  Graph() = default;
  /// Edges may be given in any orientation; self-loops, duplicates and
  /// out-of-range endpoints are rejected.
  Graph(std::size_t num_nodes, std::vector<Edge> edges);

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  /// Sorted ascending.
  std::span<const NodeId> neighbors(std::size_t node) const;
  std::size_t degree(std::size_t node) const { return offsets_[node + 1] - offsets_[node]; }
  bool has_edge(std::size_t u, std::size_t v) const;

  /// [num_nodes x d]; empty until set.
  const ad::Tensor& features() const noexcept { return features_; }
  void set_features(ad::Tensor features);

  const std::optional<std::vector<std::uint32_t>>& labels() const noexcept { return labels_; }
  void set_labels(std::vector<std::uint32_t> labels);
  void clear_labels() { labels_.reset(); }

  const std::optional<Positions>& positions() const noexcept { return positions_; }
  void set_positions(Positions positions);

  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

  /// Relabel nodes: node i becomes perm[i]. Carries features, labels and positions.
  Graph permuted(std::span<const std::uint32_t> perm) const;

 private:
  std::size_t num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  ad::Tensor features_;
  std::optional<std::vector<std::uint32_t>> labels_;
  std::optional<Positions> positions_;
};

/// All nodes within `hops` of any seed (seeds included), ascending.
std::vector<NodeId> k_hop(const Graph& graph, std::span<const NodeId> seeds, std::size_t hops);

bool is_connected(const Graph& graph);

/// One-hot rows for integer states in [0, width).
ad::Tensor one_hot_features(std::span<const std::uint32_t> states, std::size_t width);

}  // namespace mpnp::graph
