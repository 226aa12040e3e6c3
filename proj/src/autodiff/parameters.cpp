#include "mpnp/autodiff/parameters.hpp"

#include <cmath>

namespace mpnp::ad {

std::size_t ParameterSet::add(std::string name, Tensor initial) {
  if (find(name)) throw std::invalid_argument("duplicate parameter name: " + name);
  Tensor grad(initial.shape(), 0.0);
  items_.push_back(Parameter{std::move(name), std::move(initial), std::move(grad)});
  return items_.size() - 1;
}

std::size_t ParameterSet::add_uniform(std::string name, Shape shape, std::size_t fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (auto& v : t.values()) v = dist(rng);
  return add(std::move(name), std::move(t));
}

std::size_t ParameterSet::add_he_uniform(std::string name, Shape shape, std::size_t fan_in, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (auto& v : t.values()) v = dist(rng);
  return add(std::move(name), std::move(t));
}

std::size_t ParameterSet::add_zeros(std::string name, Shape shape) { return add(std::move(name), Tensor(std::move(shape))); }

const Parameter* ParameterSet::find(std::string_view name) const {
  for (const auto& p : items_)
    if (p.name == name) return &p;
  return nullptr;
}

Parameter* ParameterSet::find(std::string_view name) {
  for (auto& p : items_)
    if (p.name == name) return &p;
  return nullptr;
}

void ParameterSet::zero_grad() {
  for (auto& p : items_) {
    if (p.grad.shape() != p.value.shape()) p.grad = Tensor(p.value.shape(), 0.0);
    else p.grad.fill(0.0);
  }
}

std::size_t ParameterSet::scalar_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : items_) n += p.value.size();
  return n;
}

}  // namespace mpnp::ad
