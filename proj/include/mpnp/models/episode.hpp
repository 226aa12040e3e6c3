#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpnp/common/random.hpp"
#include "mpnp/graph/graph.hpp"

namespace mpnp::models {

using graph::NodeId;

/// A graph with a labelled context and a target set. Targets list the context
/// first (same order), followed by the extra targets.
struct Episode {
  const graph::Graph* graph = nullptr;
  std::vector<NodeId> context_ids;
  std::vector<std::uint32_t> context_labels;
  std::vector<NodeId> target_ids;
  std::vector<std::uint32_t> target_labels;  // empty when targets are unlabelled
  std::size_t num_classes = 0;

  std::size_t num_context() const noexcept { return context_ids.size(); }
  std::size_t num_targets() const noexcept { return target_ids.size(); }
  std::size_t num_extra() const noexcept { return target_ids.size() - context_ids.size(); }
  bool labelled_targets() const noexcept { return target_labels.size() == target_ids.size(); }
};

enum class Labelling { kFixed, kArbitrary };

struct FractionRange {
  double lo = 0.3;
  double hi = 0.5;
};

/// Checks context/target consistency and label ranges; throws std::invalid_argument.
void validate(const Episode& episode);

/// Builds an episode from explicit node lists. `labels` holds one label per
/// graph node (or is empty when only the context labels are known, in which
/// case `context_labels` must be passed). Context nodes are moved to the front
/// of the target list.
Episode make_episode(const graph::Graph& graph, std::vector<NodeId> context_ids,
                     std::span<const NodeId> target_ids, std::span<const std::uint32_t> labels,
                     std::size_t num_classes);

/// Context of round(u * n) nodes (at least one), u ~ U[context.lo, context.hi];
/// extra targets round(v * n), v ~ U[extra.lo, extra.hi], capped by the nodes
/// left. Labels come from graph.labels(); arbitrary labelling permutes class
/// indices once per episode.
Episode sample_episode(const graph::Graph& graph, FractionRange context, FractionRange extra, Rng& rng,
                       Labelling labelling, std::size_t num_classes);

/// Context = round(rate * n) nodes (at least one) drawn without replacement;
/// targets = every node. Used for evaluation at a fixed sampling rate.
Episode rate_episode(const graph::Graph& graph, double rate, Rng& rng, std::size_t num_classes);

}  // namespace mpnp::models
