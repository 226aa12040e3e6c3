#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mpnp/ca/rules.hpp"
#include "mpnp/graph/graph.hpp"

namespace mpnp::ca {

using State = std::vector<std::uint32_t>;  // 0 dead, 1 alive

/// Simultaneous update by live-neighbour count. Requires every degree <= 8.
State life_step(const graph::Graph& graph, std::span<const std::uint32_t> state, const LifeRule& rule);

/// Simultaneous update by live-neighbour density (self excluded, degree-0 nodes see 0).
State density_step(const graph::Graph& graph, std::span<const std::uint32_t> state, const DensityRule& rule);

State step(const graph::Graph& graph, std::span<const std::uint32_t> state, const Rule& rule);

/// Live neighbours per node.
std::vector<std::size_t> live_neighbour_counts(const graph::Graph& graph, std::span<const std::uint32_t> state);

/// Occurrences of each (state, live-count) condition, indexed state * 9 + count.
std::array<std::size_t, 18> condition_census(const graph::Graph& graph, std::span<const std::uint32_t> state);

/// True when every one of the 18 conditions occurs at least once.
bool covers_all_conditions(const graph::Graph& graph, std::span<const std::uint32_t> state);

}  // namespace mpnp::ca
