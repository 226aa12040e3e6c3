#pragma once

#include <cstdint>
#include <vector>

#include "mpnp/autodiff/parameters.hpp"

namespace mpnp::ad {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment accumulators aligned with a ParameterSet.
class AdamState {
 public:
  AdamState(const ParameterSet& params, AdamConfig config);

  const AdamConfig& config() const noexcept { return config_; }
  std::uint64_t step_count() const noexcept { return step_; }
  const Tensor& first_moment(std::size_t i) const { return m_.at(i); }
  const Tensor& second_moment(std::size_t i) const { return v_.at(i); }

 private:
  friend void adam_step(ParameterSet& params, AdamState& state);

  AdamConfig config_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  std::uint64_t step_ = 0;
};

/// Bias-corrected Adam update (descent on the stored gradients).
void adam_step(ParameterSet& params, AdamState& state);

}  // namespace mpnp::ad
