#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mpnp/autodiff/tensor.hpp"
#include "mpnp/common/random.hpp"

namespace mpnp::ad {

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;  // same shape as value once zero_grad() or backward() has run
};

/// Ordered, name-addressable collection of learnable tensors. Indices handed
/// out by add() stay valid for the lifetime of the set.
class ParameterSet {
 public:
  std::size_t add(std::string name, Tensor initial);

  /// Uniform in +-1/sqrt(fan_in) for a [out x in] weight (fan_in = in) and its
  /// [out] bias.
  std::size_t add_uniform(std::string name, Shape shape, std::size_t fan_in, Rng& rng);
  /// He-uniform: +-sqrt(6 / fan_in), variance-preserving through ReLU.
  std::size_t add_he_uniform(std::string name, Shape shape, std::size_t fan_in, Rng& rng);
  std::size_t add_zeros(std::string name, Shape shape);

  Parameter& operator[](std::size_t i) { return items_.at(i); }
  const Parameter& operator[](std::size_t i) const { return items_.at(i); }
  std::size_t size() const noexcept { return items_.size(); }

  const Parameter* find(std::string_view name) const;
  Parameter* find(std::string_view name);

  void zero_grad();
  std::size_t scalar_count() const noexcept;

  auto begin() { return items_.begin(); }
  auto end() { return items_.end(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  std::vector<Parameter> items_;
};

}  // namespace mpnp::ad
