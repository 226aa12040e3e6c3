#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpnp/graph/graph.hpp"

namespace mpnp::models {

/// Seeds plus their k-hop neighbourhood, relabelled locally: local ids
/// 0..num_seeds-1 are the seeds in the order given, the rest follow in
/// ascending global id. Edges are stored in both directions.
struct Subgraph {
  std::vector<graph::NodeId> nodes;
  std::size_t num_seeds = 0;
  std::vector<std::uint32_t> src;
  std::vector<std::uint32_t> dst;

  std::size_t size() const noexcept { return nodes.size(); }
};

Subgraph gather_subgraph(const graph::Graph& graph, std::span<const graph::NodeId> seeds, std::size_t hops);

}  // namespace mpnp::models
