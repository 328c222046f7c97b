#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lsjstn/matrix.hpp"

namespace lsjstn::ad {

class Tape;

/// Handle to a matrix on a tape. Copying a Var copies the handle, not the
/// value. A Var is only valid while its tape is alive.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  /// Gradient of the last backward() loss w.r.t. this node. Throws if absent.
  const Matrix& grad() const;
  bool has_grad() const;
  bool requires_grad() const;
  int rows() const { return value().rows(); }
  int cols() const { return value().cols(); }
  int id() const { return id_; }
  Tape* tape() const { return tape_; }
  bool valid() const { return tape_ != nullptr && id_ >= 0; }

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  int id_ = -1;
};

/// Reverse-mode tape over dense double matrices. Each operation records the
/// ids of its inputs and a closure that pushes the output gradient into them.
/// A tape lives for one forward/backward pass and is confined to one thread;
/// value snapshots read out of it are plain Matrix copies and freely shareable.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf holding data; no gradient is tracked through it.
  Var input(Matrix value);
  /// Leaf holding a learnable value; backward() populates its grad.
  Var param(Matrix value);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var hadamard(Var a, Var b);
  Var scale(Var a, double s);
  /// Broadcasts a 1xC row vector over every row of a (RxC).
  Var add_rowvec(Var a, Var row);
  Var tanh(Var a);
  Var sigmoid(Var a);
  Var relu(Var a);
  Var exp(Var a);
  /// Row-wise softmax with row-max subtraction; rows sum to 1.
  Var softmax_rows(Var a);
  Var sum_all(Var a);
  /// axis 0: 1xC column sums; axis 1: Rx1 row sums.
  Var sum_over_axis(Var a, int axis);
  Var concat_cols(Var a, Var b);
  Var transpose(Var a);
  /// out(i,j) = v . tanh(p_i + q_j + bias) for row i of p, row j of q.
  /// p is NxF, q is MxF, bias and v are 1xF; result is NxM.
  Var pair_score(Var p, Var q, Var bias, Var v);
  /// Divides every row by its sum; all-zero rows stay zero.
  Var row_normalize(Var a);

  /// Seeds d(loss)/d(loss) = 1 and sweeps the tape once in reverse
  /// topological order. loss must be 1x1. A second call without a fresh
  /// tape is an error.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }
  bool backward_done() const { return backward_done_; }

 private:
  friend class Var;

  struct Node {
    Matrix value;
    std::optional<Matrix> grad;
    bool requires_grad = false;
    std::function<void(Tape&, const Matrix&)> backprop;  // out-grad -> inputs
  };

  Var make_node(Matrix value, bool requires_grad,
                std::function<void(Tape&, const Matrix&)> backprop);
  void accumulate(int id, const Matrix& g);
  void check_mine(Var v, const char* op) const;
  const Node& node(int id) const { return nodes_[id]; }

  std::vector<Node> nodes_;
  bool backward_done_ = false;
};

inline const Matrix& Var::value() const { return tape_->nodes_[id_].value; }
inline bool Var::has_grad() const { return tape_->nodes_[id_].grad.has_value(); }
inline bool Var::requires_grad() const { return tape_->nodes_[id_].requires_grad; }
inline const Matrix& Var::grad() const {
  const auto& g = tape_->nodes_[id_].grad;
  if (!g) throw Error("Var::grad: no gradient present (run backward() first)");
  return *g;
}

}  // namespace lsjstn::ad
