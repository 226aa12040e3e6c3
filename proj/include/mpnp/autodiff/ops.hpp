#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpnp/autodiff/tape.hpp"

namespace mpnp::ad {

// Affine map along the last axis: x[..., in] -> x W^T + b, W is [out x in], b is [out].
Var linear(Var weight, Var bias, Var x);
Var linear(Var weight, Var x);

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var add_scalar(Var a, double c);
Var scale(Var a, double c);

Var relu(Var x);
Var softplus(Var x);
Var softmax_lastaxis(Var x);

/// Elementwise max over the two halves of the last axis: [..., 2h] -> [..., h].
/// Ties go to the first half, which also receives the gradient.
Var maxout(Var x);

/// Row i of the result is the sum of the rows of `values` whose id is i.
Var segment_sum(Var values, std::span<const std::uint32_t> segment_ids, std::size_t num_segments);

/// Rows of x selected by `index` (repeats allowed); gradient scatters back.
Var gather_rows(Var x, std::span<const std::uint32_t> index);

/// Row r of x multiplied by the constant weights[r].
Var scale_rows(Var x, std::span<const double> weights);

/// [n x a] ++ [n x b] -> [n x (a+b)].
Var concat_cols(Var a, Var b);

/// A [d] or [1 x d] vector tiled into [n x d].
Var repeat_rows(Var v, std::size_t n);

Var reshape(Var x, Shape shape);

/// Sum of all entries, shape {1}.
Var sum(Var x);

/// Sum over entries of log N(target | mean, sigma^2).
Var gaussian_log_density(const Tensor& target, Var mean, Var sigma);

/// KL(N(q_mu, q_sigma^2) || N(p_mu, p_sigma^2)) summed over dimensions.
Var kl_diag_gaussians(Var q_mu, Var q_sigma, Var p_mu, Var p_sigma);

/// Summed negative log-softmax likelihood of integer labels, one per row.
Var softmax_cross_entropy(Var logits, std::span<const std::uint32_t> labels);

}  // namespace mpnp::ad
