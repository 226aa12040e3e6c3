#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mpnp/graph/graph.hpp"
#include "mpnp/models/episode.hpp"
#include "mpnp/models/neural_process.hpp"

namespace mpnp::harness {

struct TrainOptions {
  std::size_t epochs = 200;
  double learning_rate = 1e-4;
  models::FractionRange context{0.3, 0.5};
  models::FractionRange target{0.3, 0.5};
  models::Labelling labelling = models::Labelling::kFixed;
  std::uint64_t seed = 0;
};

/// Per-epoch means over the training graphs.
struct EpochLog {
  std::size_t epoch = 0;
  double loss = 0.0;
  double recon = 0.0;
  double kl = 0.0;
  double seconds = 0.0;
};

/// One episode per graph per epoch in a seeded shuffled order, one Adam step
/// per episode on the negated ELBO. A non-finite loss aborts with
/// ad::NumericalError naming the epoch and graph.
std::vector<EpochLog> train_model(models::NeuralProcess& model, std::span<const graph::Graph> graphs,
                                  const TrainOptions& options,
                                  const std::function<void(const EpochLog&)>& on_epoch = {});

}  // namespace mpnp::harness
