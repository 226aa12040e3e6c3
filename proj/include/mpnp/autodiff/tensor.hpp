#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpnp::ad {

using Shape = std::vector<std::size_t>;

/// Raised when a forward pass produces NaN or Inf.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string shape_string(const Shape& shape);

/// Dense row-major array of doubles. Most tensors in this library are
/// matrices (rows x cols); vectors are rank 1 and scalars are shape {1}.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> values);

  static Tensor scalar(double value) { return Tensor({1}, {value}); }
  static Tensor vector(std::vector<double> values);
  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  /// Length of the last axis.
  std::size_t cols() const noexcept { return shape_.empty() ? 0 : shape_.back(); }
  /// Product of all axes but the last.
  std::size_t rows() const noexcept;

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols(), cols()}; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols(), cols()}; }

  double item() const;
  bool all_finite() const noexcept;
  void fill(double value);

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

std::size_t shape_size(const Shape& shape) noexcept;

}  // namespace mpnp::ad
