#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mpnp/autodiff/ops.hpp"
#include "mpnp/ca/examples.hpp"

namespace mpnp::analytic {

inline constexpr std::size_t kConditions = 18;  // state * 9 + live count

/// Fixed weights of the integer one-hot construction: a 2-pool Maxout with
/// W1 = -1, W2 = 1, b1 = (j - 1)_j, b2 = (-j - 1)_j, then -I and ReLU.
struct OneHotLayer {
  std::size_t width = 0;
  ad::Tensor maxout_weight;  // [2N x 1]
  ad::Tensor maxout_bias;    // [2N]
  ad::Tensor negate;         // [N x N] = -I
};

OneHotLayer build_one_hot_layer(std::size_t n);

/// Applies the layer to a column of scalars [m x 1] -> [m x N].
ad::Var apply_one_hot(const OneHotLayer& layer, ad::Var x);

/// Condition codes [n x 18] for every node: the live-neighbour count comes
/// from a message-passing sum, 9 * state + count from a linear map.
ad::Var condition_codes(ad::Tape& tape, const graph::Graph& graph, std::span<const std::uint32_t> state_in);

/// One-hot code for a single (state, count) observation.
std::array<double, kConditions> encode_condition(std::uint32_t state, std::uint32_t count);

/// 36 binary components: conditions seen to lead to life, then to death.
using AnalyticLatent = std::array<double, 2 * kConditions>;

/// Max-aggregated condition codes split by outcome, from labelled nodes only.
AnalyticLatent analytic_latent(const graph::Graph& graph, std::span<const std::uint32_t> state_in,
                               std::span<const graph::NodeId> context_ids,
                               std::span<const std::uint32_t> context_outcomes);
/// Full-context version; every node's outcome must be present.
AnalyticLatent analytic_latent(const ca::CAExample& example);

struct AnalyticDecoding {
  ca::State state;            // 1 iff the node's condition is in the alive half
  std::vector<char> unknown;  // condition found in neither half
};

AnalyticDecoding analytic_decode_detailed(const AnalyticLatent& latent, const graph::Graph& graph,
                                          std::span<const std::uint32_t> state_in);
ca::State analytic_decode(const AnalyticLatent& latent, const graph::Graph& graph,
                          std::span<const std::uint32_t> state_in);

struct VerifyReport {
  std::string rule;
  std::size_t nodes = 0;
  std::size_t errors = 0;
  std::size_t unknown = 0;
  bool passed() const noexcept { return errors == 0 && unknown == 0; }
};

/// analytic_decode(analytic_latent(example)) against the example's next state.
VerifyReport verify_example(const ca::CAExample& example);

}  // namespace mpnp::analytic
