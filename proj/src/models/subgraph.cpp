#include "mpnp/models/subgraph.hpp"

#include <stdexcept>

namespace mpnp::models {

Subgraph gather_subgraph(const graph::Graph& graph, std::span<const graph::NodeId> seeds, std::size_t hops) {
  constexpr auto kAbsent = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> local(graph.num_nodes(), kAbsent);
  Subgraph sub;
  sub.num_seeds = seeds.size();
  for (auto s : seeds) {
    if (s >= graph.num_nodes()) throw std::out_of_range("gather_subgraph: seed out of range");
    if (local[s] != kAbsent) throw std::invalid_argument("gather_subgraph: duplicate seed");
    local[s] = static_cast<std::uint32_t>(sub.nodes.size());
    sub.nodes.push_back(s);
  }
  for (auto v : graph::k_hop(graph, seeds, hops)) {
    if (local[v] != kAbsent) continue;
    local[v] = static_cast<std::uint32_t>(sub.nodes.size());
    sub.nodes.push_back(v);
  }
  for (std::uint32_t i = 0; i < sub.nodes.size(); ++i)
    for (auto nb : graph.neighbors(sub.nodes[i]))
      if (local[nb] != kAbsent) {
        sub.src.push_back(local[nb]);
        sub.dst.push_back(i);
      }
  return sub;
}

}  // namespace mpnp::models
