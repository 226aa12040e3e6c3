#include "mpnp/autodiff/gaussian.hpp"

#include <cmath>

namespace mpnp::ad {

Var reparam_sample(const GaussianVar& q, const Tensor& noise) {
  if (noise.shape() != q.mu.shape())
    throw std::invalid_argument("reparam_sample: noise shape " + shape_string(noise.shape()) + " vs mu " +
                                shape_string(q.mu.shape()));
  Var eps = q.mu.tape().constant(noise);
  return add(q.mu, mul(q.sigma, eps));
}

Var kl_diag_gaussians(const GaussianVar& q, const GaussianVar& p) {
  return kl_diag_gaussians(q.mu, q.sigma, p.mu, p.sigma);
}

double kl_diag_gaussians(const DiagGaussian& q, const DiagGaussian& p) {
  if (q.mu.shape() != p.mu.shape() || q.sigma.shape() != q.mu.shape() || p.sigma.shape() != p.mu.shape())
    throw std::invalid_argument("kl_diag_gaussians: shape mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < q.mu.size(); ++i) {
    if (!(q.sigma[i] > 0.0) || !(p.sigma[i] > 0.0))
      throw std::invalid_argument("kl_diag_gaussians: sigma must be positive");
    const double d = q.mu[i] - p.mu[i];
    total += std::log(p.sigma[i] / q.sigma[i]) + (q.sigma[i] * q.sigma[i] + d * d) / (2.0 * p.sigma[i] * p.sigma[i]) -
             0.5;
  }
  return total;
}

Var bounded_scale(Var x) { return add_scalar(scale(softplus(x), 1.0 - kSigmaFloor), kSigmaFloor); }

}  // namespace mpnp::ad
