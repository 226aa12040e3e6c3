#pragma once

#include "mpnp/autodiff/ops.hpp"

namespace mpnp::ad {

struct DiagGaussian {
  Tensor mu;
  Tensor sigma;  // > 0 elementwise
};

/// A diagonal Gaussian whose parameters live on a tape.
struct GaussianVar {
  Var mu;
  Var sigma;

  DiagGaussian value() const { return {mu.value(), sigma.value()}; }
};

/// mu + sigma * noise, differentiable in mu and sigma.
Var reparam_sample(const GaussianVar& q, const Tensor& noise);

Var kl_diag_gaussians(const GaussianVar& q, const GaussianVar& p);

/// Closed-form KL(q || p) on plain tensors.
double kl_diag_gaussians(const DiagGaussian& q, const DiagGaussian& p);

/// 0.1 + 0.9 * softplus(x): the positive scale transform used for every sigma head.
Var bounded_scale(Var x);

inline constexpr double kSigmaFloor = 0.1;

}  // namespace mpnp::ad
