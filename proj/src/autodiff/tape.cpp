#include "mpnp/autodiff/tape.hpp"

namespace mpnp::ad {

const Tensor& Var::value() const { return tape_->value_of(index_); }

const Tensor& Var::grad() const { return tape_->grad_of(index_); }

bool Var::requires_grad() const { return tape_->requires_grad(index_); }

Var Tape::push(Node node) {
  if (!node.value.all_finite()) throw NumericalError("non-finite value produced on tape");
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Tensor value) { return push(Node{std::move(value), {}, {}, false, nullptr}); }

Var Tape::variable(Tensor value) { return push(Node{std::move(value), {}, {}, track_gradients_, nullptr}); }

Var Tape::parameter(Parameter& parameter) {
  return push(Node{parameter.value, {}, {}, track_gradients_, track_gradients_ ? &parameter : nullptr});
}

Var Tape::record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward) {
  bool needs = false;
  if (track_gradients_) {
    for (const Var& v : inputs) {
      if (&v.tape() != this) throw std::invalid_argument("operands recorded on different tapes");
      needs = needs || nodes_[v.index()].requires_grad;
    }
  }
  return push(Node{std::move(value), {}, needs ? std::move(backward) : BackwardFn{}, needs, nullptr});
}

Tensor& Tape::grad_of(std::size_t index) {
  Node& node = nodes_[index];
  if (node.grad.empty()) node.grad = Tensor(node.value.shape(), 0.0);
  return node.grad;
}

void Tape::backward(Var loss) {
  if (&loss.tape() != this) throw std::invalid_argument("backward: loss belongs to another tape");
  if (loss.value().size() != 1)
    throw std::invalid_argument("backward: loss must be scalar, got " + shape_string(loss.shape()));
  for (auto& node : nodes_) node.grad = Tensor{};
  grad_of(loss.index()).fill(1.0);
  for (std::size_t i = loss.index() + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (node.grad.empty() || !node.requires_grad) continue;
    if (node.backward) node.backward(*this, i);
    if (node.parameter) {
      Tensor& target = node.parameter->grad;
      if (target.shape() != node.value.shape()) target = Tensor(node.value.shape(), 0.0);
      auto src = node.grad.values();
      auto dst = target.values();
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
    }
  }
}

}  // namespace mpnp::ad
