#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mpnp/autodiff/adam.hpp"
#include "mpnp/autodiff/ops.hpp"
#include "mpnp/graph/graph.hpp"

namespace mpnp::baselines {

/// Entries of D^-1/2 (A + I) D^-1/2 as (src, dst, weight) triples, self-loops included.
struct NormalizedAdjacency {
  std::vector<std::uint32_t> src;
  std::vector<std::uint32_t> dst;
  std::vector<double> weight;
};
NormalizedAdjacency normalized_adjacency(const graph::Graph& graph);

struct GnnConfig {
  std::size_t feature_dim = 2;
  std::size_t num_classes = 2;
  std::size_t h = 64;
  std::size_t layers = 3;
};

/// h_{t+1} = ReLU(h_t W_skip^T + A_hat h_t W_gcn^T + b) for each layer, then a
/// linear classifier head. Inductive: uses node features only.
class Gnn {
 public:
  Gnn(GnnConfig config, std::uint64_t seed);

  const GnnConfig& config() const noexcept { return config_; }
  ad::ParameterSet& parameters() noexcept { return params_; }
  const ad::ParameterSet& parameters() const noexcept { return params_; }

  ad::Var forward(ad::Tape& tape, std::span<const ad::Var> bound, const graph::Graph& graph) const;
  std::vector<ad::Var> bind(ad::Tape& tape);

  /// Per-node logits [n x C].
  ad::Tensor logits(const graph::Graph& graph) const;
  std::vector<std::uint32_t> predict(const graph::Graph& graph) const;

 private:
  struct LayerIds {
    std::size_t gcn, skip, bias;
  };
  GnnConfig config_;
  ad::ParameterSet params_;
  std::vector<LayerIds> layers_;
  std::size_t head_weight_ = 0, head_bias_ = 0;
};

struct GnnTrainConfig {
  std::size_t epochs = 500;
  double learning_rate = 1e-4;
};

/// Full-graph cross-entropy on each labelled training graph, one Adam step per
/// graph, graphs visited in a seeded shuffled order each epoch. `on_epoch`
/// receives (epoch, mean loss).
void train_gnn(Gnn& gnn, std::span<const graph::Graph* const> graphs, const GnnTrainConfig& config, std::uint64_t seed,
               const std::function<void(std::size_t, double)>& on_epoch = {});

}  // namespace mpnp::baselines
