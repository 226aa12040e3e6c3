#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mpnp/models/episode.hpp"

namespace mpnp::baselines {

/// kGlobal and kPopulation both predict the most common context label; kState
/// conditions on the node's initial state (argmax of its feature row) and
/// falls back to the global mode for states absent from the context.
enum class ModeVariant { kGlobal, kPopulation, kState };

ModeVariant parse_mode_variant(const std::string& name);  // "global", "population", "state"
std::string mode_variant_name(ModeVariant variant);

/// Most frequent label, ties to the lowest class index.
std::uint32_t most_common(std::span<const std::uint32_t> labels, std::size_t num_classes);

/// One prediction per target, in target order.
std::vector<std::uint32_t> mode_predict(const models::Episode& episode, ModeVariant variant);

/// Initial state of a node: argmax of its feature row.
std::uint32_t node_state(const graph::Graph& graph, graph::NodeId node);

}  // namespace mpnp::baselines
