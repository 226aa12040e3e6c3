#pragma once

#include <deque>
#include <functional>
#include <initializer_list>

#include "mpnp/autodiff/parameters.hpp"
#include "mpnp/autodiff/tensor.hpp"

namespace mpnp::ad {

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;

  Tape& tape() const { return *tape_; }
  std::size_t index() const noexcept { return index_; }
  bool valid() const noexcept { return tape_ != nullptr; }

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  /// Gradient of the last backward() target with respect to this value
  /// (zeros when the value was not reached).
  const Tensor& grad() const;
  bool requires_grad() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t index) : tape_(tape), index_(index) {}

  Tape* tape_ = nullptr;
  std::size_t index_ = 0;
};

/// Define-by-run record of primitive operations. Built fresh for every
/// forward pass and confined to one thread.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t)>;

  explicit Tape(bool track_gradients = true) : track_gradients_(track_gradients) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool tracking() const noexcept { return track_gradients_; }

  Var constant(Tensor value);
  Var variable(Tensor value);
  /// Leaf linked to a parameter: backward() adds into parameter.grad.
  Var parameter(Parameter& parameter);

  /// Reverse sweep from a scalar. Gradients of earlier sweeps are discarded;
  /// parameter gradients accumulate.
  void backward(Var loss);

  std::size_t size() const noexcept { return nodes_.size(); }

  // Used by op implementations.
  Var record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward);
  const Tensor& value_of(std::size_t index) const { return nodes_[index].value; }
  bool requires_grad(std::size_t index) const { return nodes_[index].requires_grad; }
  /// Gradient buffer for a node, zero-initialized on first access.
  Tensor& grad_of(std::size_t index);
  bool has_grad(std::size_t index) const { return !nodes_[index].grad.empty(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    BackwardFn backward;
    bool requires_grad = false;
    Parameter* parameter = nullptr;
  };

  Var push(Node node);

  std::deque<Node> nodes_;
  bool track_gradients_;
};

}  // namespace mpnp::ad
