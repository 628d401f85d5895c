#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gplp/error.hpp"
#include "gplp/tensor.hpp"

namespace gplp {

// Handle to a value recorded on a Tape.
struct Var {
  std::size_t id = std::numeric_limits<std::size_t>::max();
};

// Reverse-mode gradient tape. Values are appended in execution order, which is
// a topological order, so backward is a single reverse sweep. A tape supports
// one backward pass; build a fresh tape per step.
template <class Scalar>
class Tape {
 public:
  using TensorT = BasicTensor<Scalar>;
  using Backward = std::function<void(Tape&, std::size_t self)>;

  Var leaf(TensorT value, bool requires_grad = true) {
    return push(std::move(value), requires_grad, nullptr, "leaf");
  }
  Var constant(TensorT value) { return leaf(std::move(value), false); }

  // Records an op output. `backward` reads grad(self) and accumulates into inputs.
  Var record(TensorT value, bool requires_grad, Backward backward, const char* op) {
    return push(std::move(value), requires_grad, requires_grad ? std::move(backward) : nullptr, op);
  }

  const TensorT& value(Var v) const { return node(v).value; }
  bool requires_grad(Var v) const { return node(v).requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  // Gradient of the last backward target w.r.t. v (zeros if v was unreached).
  const TensorT& grad(Var v) {
    auto& n = node(v);
    if (n.grad.size() != n.value.size()) n.grad = TensorT(n.value.rows(), n.value.cols());
    return n.grad;
  }

  TensorT& grad_accumulator(std::size_t id) {
    auto& n = nodes_[id];
    if (n.grad.size() != n.value.size()) n.grad = TensorT(n.value.rows(), n.value.cols());
    return n.grad;
  }

  void backward(Var out) {
    if (consumed_) throw Error(ErrorKind::BadParameter, "tape already consumed by a backward pass");
    consumed_ = true;
    auto& seed = grad_accumulator(node_index(out));
    seed.fill(Scalar(1));
    for (std::size_t i = out.id + 1; i-- > 0;) {
      auto& n = nodes_[i];
      if (n.backward && n.grad.size() == n.value.size()) n.backward(*this, i);
    }
  }

 private:
  struct Node {
    TensorT value;
    TensorT grad;
    bool requires_grad = false;
    Backward backward;
  };

  Var push(TensorT value, bool requires_grad, Backward backward, const char* op) {
    if (!value.all_finite()) throw Error(ErrorKind::NonFinite, std::string("non-finite output from ") + op);
    nodes_.push_back({std::move(value), TensorT(), requires_grad, std::move(backward)});
    return Var{nodes_.size() - 1};
  }

  std::size_t node_index(Var v) const {
    if (v.id >= nodes_.size()) throw Error(ErrorKind::IndexError, "variable not on this tape");
    return v.id;
  }
  Node& node(Var v) { return nodes_[node_index(v)]; }
  const Node& node(Var v) const { return nodes_[node_index(v)]; }

  std::vector<Node> nodes_;
  bool consumed_ = false;
};

}  // namespace gplp
