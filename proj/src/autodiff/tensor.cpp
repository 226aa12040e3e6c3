#include "mpnp/autodiff/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace mpnp::ad {

std::size_t shape_size(const Shape& shape) noexcept {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

std::string shape_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

namespace {
void check_shape(const Shape& shape) {
  if (shape.empty()) throw std::invalid_argument("tensor shape must have at least one axis");
  for (auto d : shape)
    if (d == 0) throw std::invalid_argument("tensor dimensions must be positive, got " + shape_string(shape));
}
}  // namespace

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
  check_shape(shape_);
  values_.assign(shape_size(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> values) : shape_(std::move(shape)), values_(std::move(values)) {
  check_shape(shape_);
  if (values_.size() != shape_size(shape_))
    throw std::invalid_argument("value count " + std::to_string(values_.size()) + " does not match shape " +
                                shape_string(shape_));
}

Tensor Tensor::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<double> values;
  values.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("ragged matrix literal");
    values.insert(values.end(), row.begin(), row.end());
  }
  return Tensor({r, c}, std::move(values));
}

std::size_t Tensor::rows() const noexcept {
  if (shape_.empty()) return 0;
  return std::accumulate(shape_.begin(), shape_.end() - 1, std::size_t{1}, std::multiplies<>{});
}

double Tensor::item() const {
  if (values_.size() != 1) throw std::invalid_argument("item() on non-scalar tensor " + shape_string(shape_));
  return values_[0];
}

bool Tensor::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void Tensor::fill(double value) { std::fill(values_.begin(), values_.end(), value); }

}  // namespace mpnp::ad
