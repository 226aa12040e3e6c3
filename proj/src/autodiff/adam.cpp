#include "mpnp/autodiff/adam.hpp"

#include <cmath>

namespace mpnp::ad {

AdamState::AdamState(const ParameterSet& params, AdamConfig config) : config_(config) {
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const auto& p : params) {
    m_.emplace_back(p.value.shape(), 0.0);
    v_.emplace_back(p.value.shape(), 0.0);
  }
}

void adam_step(ParameterSet& params, AdamState& state) {
  if (params.size() != state.m_.size()) throw std::invalid_argument("adam_step: parameter count changed");
  const AdamConfig& cfg = state.config_;
  ++state.step_;
  const double t = static_cast<double>(state.step_);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = params[k];
    Tensor& m = state.m_[k];
    Tensor& v = state.v_[k];
    if (p.grad.shape() != p.value.shape() || m.shape() != p.value.shape())
      throw std::invalid_argument("adam_step: shape mismatch for parameter " + p.name);
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p.value[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }
}

}  // namespace mpnp::ad
