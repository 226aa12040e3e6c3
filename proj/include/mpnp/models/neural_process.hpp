#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpnp/autodiff/gaussian.hpp"
#include "mpnp/autodiff/ops.hpp"
#include "mpnp/autodiff/parameters.hpp"
#include "mpnp/models/episode.hpp"
#include "mpnp/models/subgraph.hpp"

namespace mpnp::models {

/// kStandard: Linear, {MP, ReLU} x T stacks. kCellular: the Maxout variant
/// used for cellular-automata tasks (one message-passing layer).
enum class Architecture { kStandard, kCellular };
enum class Aggregation { kMean, kPerClass };

struct ModelConfig {
  Architecture architecture = Architecture::kStandard;
  bool message_passing = true;
  Aggregation aggregation = Aggregation::kMean;
  std::size_t feature_dim = 2;
  std::size_t num_classes = 2;
  std::size_t h = 64;
  std::size_t r = 64;
  std::size_t z = 128;
  std::size_t T = 1;  // message-passing rounds (standard architecture)

  /// "mpnp", "np", "mpnp-c" or "np-c".
  std::string kind() const;
  /// Radius of the neighbourhood a forward pass can see.
  std::size_t hops() const;
  void validate() const;
};

/// Parses "np" | "mpnp" | "np-c" | "mpnp-c" into the message-passing and
/// aggregation fields of `base`.
ModelConfig config_for_kind(const std::string& kind, ModelConfig base);

/// Decoder output over the targets: mean rows are softmax distributions and
/// sigma >= 0.1 elementwise.
struct Prediction {
  ad::Tensor mean;   // [n x C]
  ad::Tensor sigma;  // [n x C]

  std::vector<std::uint32_t> labels() const;  // argmax, ties to the lowest class
  std::vector<double> uncertainty() const;    // mean sigma per row
};

struct PredictionVar {
  ad::Var mean;
  ad::Var sigma;
};

struct ElboTerms {
  ad::Var loss;   // -(recon - kl)
  ad::Var recon;  // summed Gaussian log-density over extra targets
  ad::Var kl;
};

/// One step of a network stack.
struct Layer {
  enum class Op { kDense, kMessage, kRelu, kMaxout, kConcatLatent };
  Op op;
  std::size_t weight = 0;  // dense weight, or skip weight for message passing
  std::size_t bias = 0;
  std::size_t message = 0;  // message weight (kMessage only)
};

/// Encoder, latent head and decoder weights with the forward semantics of
/// a (message passing) neural process.
class NeuralProcess {
 public:
  NeuralProcess(ModelConfig config, std::uint64_t seed);

  const ModelConfig& config() const noexcept { return config_; }
  ad::ParameterSet& parameters() noexcept { return params_; }
  const ad::ParameterSet& parameters() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Tape leaves for every parameter, indexed like parameters().
  class Bound {
   public:
    ad::Var operator[](std::size_t i) const { return vars_.at(i); }
    ad::Tape& tape() const { return *tape_; }

   private:
    friend class NeuralProcess;
    ad::Tape* tape_ = nullptr;
    std::vector<ad::Var> vars_;
  };
  Bound bind(ad::Tape& tape);
  /// Parameters as constants: no gradient flows back to the model.
  Bound bind_constant(ad::Tape& tape) const;

  /// Rows for the subgraph nodes: features || one-hot label for the first
  /// labels.size() local nodes, features || 0 for the rest.
  ad::Tensor build_inputs(const graph::Graph& graph, const Subgraph& sub, std::span<const std::uint32_t> labels) const;

  /// Per-node representations r_i for the labelled nodes `ids`, [m x r].
  ad::Var encode(const Bound& b, const graph::Graph& graph, std::span<const NodeId> ids,
                 std::span<const std::uint32_t> labels) const;
  ad::Var aggregate(ad::Var r_rows, std::span<const std::uint32_t> labels) const;
  ad::GaussianVar latent_head(const Bound& b, ad::Var r) const;
  /// q(z | labelled ids): encode, aggregate, latent head.
  ad::GaussianVar posterior(const Bound& b, const graph::Graph& graph, std::span<const NodeId> ids,
                            std::span<const std::uint32_t> labels) const;
  PredictionVar decode(const Bound& b, ad::Var z, const graph::Graph& graph, std::span<const NodeId> target_ids) const;

  /// Negated ELBO with z drawn from q(z | targets) using the given unit noise.
  ElboTerms elbo(const Bound& b, const Episode& episode, const ad::Tensor& noise) const;
  ElboTerms elbo(const Bound& b, const Episode& episode, Rng& rng) const;

  /// Predictions for every target from the context. Without noise, z is the
  /// mean of q(z | context); with noise, z = mu + sigma * noise.
  Prediction predict(const Episode& episode, const ad::Tensor* noise = nullptr) const;
  ad::DiagGaussian context_posterior(const Episode& episode) const;

  const std::vector<Layer>& encoder_layers() const noexcept { return encoder_; }
  const std::vector<Layer>& decoder_layers() const noexcept { return decoder_; }

 private:
  ad::Var run_stack(const Bound& b, const std::vector<Layer>& layers, ad::Var h, const Subgraph& sub,
                    std::optional<ad::Var> z) const;
  Layer make_dense(const std::string& name, std::size_t in, std::size_t out, Rng& rng);
  Layer make_message(const std::string& name, std::size_t in, std::size_t out, Rng& rng);
  void build();

  ModelConfig config_;
  std::uint64_t seed_;
  ad::ParameterSet params_;
  std::vector<Layer> encoder_;
  std::vector<Layer> decoder_;
  std::vector<Layer> latent_trunk_;
  Layer latent_mu_{}, latent_sigma_{}, head_mu_{}, head_sigma_{};
};

/// Message-passing layer: ReLU(h W_skip^T + b + sum_{j in N(i)} h_j W_msg^T).
ad::Var mp_layer(ad::Var skip, ad::Var message, ad::Var bias, ad::Var h, const Subgraph& sub);

/// Mean of the rows of r (non-empty), [1 x r].
ad::Var aggregate_mean(ad::Var r_rows);
/// Per-class means concatenated in class order (zero block for absent classes), [1 x C*r].
ad::Var aggregate_per_class(ad::Var r_rows, std::span<const std::uint32_t> labels, std::size_t num_classes);

/// CA-architecture forward pass; throws unless the model uses the Maxout variant.
Prediction ca_forward(const NeuralProcess& model, const Episode& episode);

}  // namespace mpnp::models
