#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpnp/graph/graph.hpp"
#include "mpnp/harness/evaluate.hpp"

namespace mpnp::harness {

enum class PickRule { kUncertainty, kRandom };

/// Accuracy over every node after 0, 1, ..., steps label acquisitions.
struct ActiveCurve {
  std::vector<double> accuracy;
  std::vector<graph::NodeId> picked;
  double auc() const;  // mean accuracy over the curve
};

/// Greedy acquisition: every step the predictor sees the current context with
/// all nodes as targets; the unlabelled node with the largest uncertainty
/// (ties to the lowest index) or a uniformly random one is labelled next.
ActiveCurve active_sampling(const Predictor& predictor, const graph::Graph& graph,
                            std::vector<graph::NodeId> initial_context, std::size_t steps, PickRule rule,
                            std::size_t num_classes, Rng* rng = nullptr);

struct ActiveOptions {
  std::size_t episodes = 50;
  std::size_t steps = 20;
  double initial_rate = 0.1;
  std::uint64_t seed = 0;
  std::size_t num_classes = 2;
};

struct ActiveComparison {
  std::vector<ActiveCurve> uncertainty;
  std::vector<ActiveCurve> random;
  /// Episodes where the uncertainty curve's AUC is strictly larger.
  std::size_t wins() const;
  double win_rate() const;
};

/// Episode k uses graph k mod |graphs| and the same initial context for both rules.
ActiveComparison compare_active(const Predictor& predictor, std::span<const graph::Graph> graphs,
                                const ActiveOptions& options);

}  // namespace mpnp::harness
