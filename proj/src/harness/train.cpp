#include "mpnp/harness/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mpnp/autodiff/adam.hpp"
#include "mpnp/autodiff/tape.hpp"

namespace mpnp::harness {

std::vector<EpochLog> train_model(models::NeuralProcess& model, std::span<const graph::Graph> graphs,
                                  const TrainOptions& options, const std::function<void(const EpochLog&)>& on_epoch) {
  if (graphs.empty()) throw std::invalid_argument("train: the training set is empty");
  const std::size_t C = model.config().num_classes;
  ad::AdamConfig adam;
  adam.learning_rate = options.learning_rate;
  ad::AdamState state(model.parameters(), adam);

  std::vector<EpochLog> logs;
  std::vector<std::size_t> order(graphs.size());
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(derive_seed(options.seed, epoch + 1));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    EpochLog log;
    log.epoch = epoch;
    for (std::size_t gi : order) {
      const auto episode = models::sample_episode(graphs[gi], options.context, options.target, rng,
                                                  options.labelling, C);
      model.parameters().zero_grad();
      ad::Tape tape;
      const auto bound = model.bind(tape);
      models::ElboTerms terms;
      try {
        terms = model.elbo(bound, episode, rng);
      } catch (const ad::NumericalError& e) {
        std::ostringstream msg;
        msg << "non-finite value in epoch " << epoch << ", graph " << gi << " (" << graphs[gi].num_nodes()
            << " nodes, context " << episode.num_context() << ", targets " << episode.num_targets()
            << "): " << e.what();
        throw ad::NumericalError(msg.str());
      }
      const double loss = terms.loss.value().item();
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "loss is " << loss << " in epoch " << epoch << ", graph " << gi << " (recon "
            << terms.recon.value().item() << ", kl " << terms.kl.value().item() << ")";
        throw ad::NumericalError(msg.str());
      }
      tape.backward(terms.loss);
      ad::adam_step(model.parameters(), state);
      log.loss += loss;
      log.recon += terms.recon.value().item();
      log.kl += terms.kl.value().item();
    }
    const auto n = static_cast<double>(graphs.size());
    log.loss /= n;
    log.recon /= n;
    log.kl /= n;
    log.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    logs.push_back(log);
    if (on_epoch) on_epoch(log);
  }
  return logs;
}

}  // namespace mpnp::harness
