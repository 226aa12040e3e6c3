#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpnp/autodiff/tensor.hpp"
#include "mpnp/graph/graph.hpp"

namespace mpnp::baselines {

struct LabelPropagationResult {
  ad::Tensor distribution;                  // [n x C]
  std::vector<std::uint32_t> predictions;   // argmax per node, ties to the lowest class
  std::size_t iterations = 0;
  std::vector<double> max_change;           // per iteration
};

/// Clamped diffusion: unlabelled nodes repeatedly take the mean of their
/// neighbours' distributions (synchronous update, zero start), labelled nodes
/// stay one-hot. Stops when the largest change drops below tol.
LabelPropagationResult label_propagation(const graph::Graph& graph, std::span<const graph::NodeId> labelled,
                                         std::span<const std::uint32_t> labels, std::size_t num_classes,
                                         std::size_t max_iters = 1000, double tol = 1e-6);

/// Index of the largest entry, ties to the lowest index.
std::uint32_t argmax(std::span<const double> row);

}  // namespace mpnp::baselines
