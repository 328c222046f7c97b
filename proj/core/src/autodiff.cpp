#include "lsjstn/autodiff.hpp"

#include <cmath>
#include <utility>

namespace lsjstn::ad {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b))
    throw ShapeError(std::string(op) + ": lhs " + shape_str(a.rows(), a.cols()) + ", rhs " +
                     shape_str(b.rows(), b.cols()));
}

}  // namespace

Var Tape::make_node(Matrix value, bool requires_grad,
                    std::function<void(Tape&, const Matrix&)> backprop) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  n.backprop = std::move(backprop);
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

void Tape::accumulate(int id, const Matrix& g) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return;
  if (!n.grad) {
    n.grad = g;
    return;
  }
  Matrix& acc = *n.grad;
  for (int r = 0; r < acc.rows(); ++r)
    for (int c = 0; c < acc.cols(); ++c) acc(r, c) += g(r, c);
}

void Tape::check_mine(Var v, const char* op) const {
  if (!v.valid() || v.tape() != this || v.id() >= static_cast<int>(nodes_.size()))
    throw Error(std::string(op) + ": operand does not belong to this tape");
}

Var Tape::input(Matrix value) { return make_node(std::move(value), false, nullptr); }

Var Tape::param(Matrix value) { return make_node(std::move(value), true, nullptr); }

Var Tape::matmul(Var a, Var b) {
  check_mine(a, "matmul");
  check_mine(b, "matmul");
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.cols() != bv.rows())
    throw ShapeError("matmul: lhs " + shape_str(av.rows(), av.cols()) + ", rhs " +
                     shape_str(bv.rows(), bv.cols()));
  Matrix out = lsjstn::matmul(av, bv);
  const int ia = a.id(), ib = b.id();
  return make_node(std::move(out), a.requires_grad() || b.requires_grad(),
                   [ia, ib](Tape& t, const Matrix& g) {
                     const Matrix& A = t.nodes_[ia].value;
                     const Matrix& B = t.nodes_[ib].value;
                     if (t.nodes_[ia].requires_grad) t.accumulate(ia, lsjstn::matmul(g, lsjstn::transpose(B)));
                     if (t.nodes_[ib].requires_grad) t.accumulate(ib, lsjstn::matmul(lsjstn::transpose(A), g));
                   });
}

Var Tape::add(Var a, Var b) {
  check_mine(a, "add");
  check_mine(b, "add");
  check_same_shape(a.value(), b.value(), "add");
  Matrix out = a.value();
  const Matrix& bv = b.value();
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out(r, c) += bv(r, c);
  const int ia = a.id(), ib = b.id();
  return make_node(std::move(out), a.requires_grad() || b.requires_grad(),
                   [ia, ib](Tape& t, const Matrix& g) {
                     t.accumulate(ia, g);
                     t.accumulate(ib, g);
                   });
}

Var Tape::sub(Var a, Var b) {
  check_mine(a, "sub");
  check_mine(b, "sub");
  check_same_shape(a.value(), b.value(), "sub");
  Matrix out = a.value();
  const Matrix& bv = b.value();
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out(r, c) -= bv(r, c);
  const int ia = a.id(), ib = b.id();
  return make_node(std::move(out), a.requires_grad() || b.requires_grad(),
                   [ia, ib](Tape& t, const Matrix& g) {
                     t.accumulate(ia, g);
                     if (!t.nodes_[ib].requires_grad) return;
                     Matrix ng = g;
                     for (int r = 0; r < ng.rows(); ++r)
                       for (int c = 0; c < ng.cols(); ++c) ng(r, c) = -ng(r, c);
                     t.accumulate(ib, ng);
                   });
}

Var Tape::hadamard(Var a, Var b) {
  check_mine(a, "hadamard");
  check_mine(b, "hadamard");
  check_same_shape(a.value(), b.value(), "hadamard");
  Matrix out = a.value();
  const Matrix& bv = b.value();
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out(r, c) *= bv(r, c);
  const int ia = a.id(), ib = b.id();
  return make_node(std::move(out), a.requires_grad() || b.requires_grad(),
                   [ia, ib](Tape& t, const Matrix& g) {
                     const Matrix& A = t.nodes_[ia].value;
                     const Matrix& B = t.nodes_[ib].value;
                     if (t.nodes_[ia].requires_grad) {
                       Matrix ga = g;
                       for (int r = 0; r < ga.rows(); ++r)
                         for (int c = 0; c < ga.cols(); ++c) ga(r, c) *= B(r, c);
                       t.accumulate(ia, ga);
                     }
                     if (t.nodes_[ib].requires_grad) {
                       Matrix gb = g;
                       for (int r = 0; r < gb.rows(); ++r)
                         for (int c = 0; c < gb.cols(); ++c) gb(r, c) *= A(r, c);
                       t.accumulate(ib, gb);
                     }
                   });
}

Var Tape::scale(Var a, double s) {
  check_mine(a, "scale");
  Matrix out = a.value();
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out(r, c) *= s;
  const int ia = a.id();
  return make_node(std::move(out), a.requires_grad(), [ia, s](Tape& t, const Matrix& g) {
    Matrix ga = g;
    for (int r = 0; r < ga.rows(); ++r)
      for (int c = 0; c < ga.cols(); ++c) ga(r, c) *= s;
    t.accumulate(ia, ga);
  });
}

Var Tape::add_rowvec(Var a, Var row) {
  check_mine(a, "add_rowvec");
  check_mine(row, "add_rowvec");
  const Matrix& av = a.value();
  const Matrix& rv = row.value();
  if (rv.rows() != 1 || rv.cols() != av.cols())
    throw ShapeError("add_rowvec: matrix " + shape_str(av.rows(), av.cols()) + ", row " +
                     shape_str(rv.rows(), rv.cols()));
  Matrix out = av;
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out(r, c) += rv(0, c);
  const int ia = a.id(), ir = row.id();
  return make_node(std::move(out), a.requires_grad() || row.requires_grad(),
                   [ia, ir](Tape& t, const Matrix& g) {
                     t.accumulate(ia, g);
                     if (!t.nodes_[ir].requires_grad) return;
                     Matrix gr(1, g.cols());
                     for (int r = 0; r < g.rows(); ++r)
                       for (int c = 0; c < g.cols(); ++c) gr(0, c) += g(r, c);
                     t.accumulate(ir, gr);
                   });
}

Var Tape::tanh(Var a) {
  check_mine(a, "tanh");
  Matrix out = a.value();
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out(r, c) = std::tanh(out(r, c));
  const int ia = a.id();
  const int oid = static_cast<int>(nodes_.size());
  return make_node(std::move(out), a.requires_grad(), [ia, oid](Tape& t, const Matrix& g) {
    const Matrix& y = t.nodes_[oid].value;
    Matrix ga = g;
    for (int r = 0; r < ga.rows(); ++r)
      for (int c = 0; c < ga.cols(); ++c) ga(r, c) *= 1.0 - y(r, c) * y(r, c);
    t.accumulate(ia, ga);
  });
}

Var Tape::sigmoid(Var a) {
  check_mine(a, "sigmoid");
  Matrix out = a.value();
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) {
      const double x = out(r, c);
      // split by sign so exp never overflows
      out(r, c) = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    }
  const int ia = a.id();
  const int oid = static_cast<int>(nodes_.size());
  return make_node(std::move(out), a.requires_grad(), [ia, oid](Tape& t, const Matrix& g) {
    const Matrix& y = t.nodes_[oid].value;
    Matrix ga = g;
    for (int r = 0; r < ga.rows(); ++r)
      for (int c = 0; c < ga.cols(); ++c) ga(r, c) *= y(r, c) * (1.0 - y(r, c));
    t.accumulate(ia, ga);
  });
}

Var Tape::relu(Var a) {
  check_mine(a, "relu");
  Matrix out = a.value();
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out(r, c) = out(r, c) > 0.0 ? out(r, c) : 0.0;
  const int ia = a.id();
  return make_node(std::move(out), a.requires_grad(), [ia](Tape& t, const Matrix& g) {
    const Matrix& x = t.nodes_[ia].value;
    Matrix ga = g;
    for (int r = 0; r < ga.rows(); ++r)
      for (int c = 0; c < ga.cols(); ++c)
        if (x(r, c) <= 0.0) ga(r, c) = 0.0;
    t.accumulate(ia, ga);
  });
}

Var Tape::exp(Var a) {
  check_mine(a, "exp");
  Matrix out = a.value();
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) out(r, c) = std::exp(out(r, c));
  const int ia = a.id();
  const int oid = static_cast<int>(nodes_.size());
  return make_node(std::move(out), a.requires_grad(), [ia, oid](Tape& t, const Matrix& g) {
    const Matrix& y = t.nodes_[oid].value;
    Matrix ga = g;
    for (int r = 0; r < ga.rows(); ++r)
      for (int c = 0; c < ga.cols(); ++c) ga(r, c) *= y(r, c);
    t.accumulate(ia, ga);
  });
}

Var Tape::softmax_rows(Var a) {
  check_mine(a, "softmax_rows");
  const Matrix& av = a.value();
  if (av.cols() < 1) throw ShapeError("softmax_rows: needs cols >= 1, got " + shape_str(av.rows(), av.cols()));
  Matrix out(av.rows(), av.cols());
  for (int r = 0; r < av.rows(); ++r) {
    double mx = av(r, 0);
    for (int c = 1; c < av.cols(); ++c) mx = std::max(mx, av(r, c));
    double sum = 0.0;
    for (int c = 0; c < av.cols(); ++c) {
      out(r, c) = std::exp(av(r, c) - mx);
      sum += out(r, c);
    }
    for (int c = 0; c < av.cols(); ++c) out(r, c) /= sum;
  }
  const int ia = a.id();
  const int oid = static_cast<int>(nodes_.size());
  return make_node(std::move(out), a.requires_grad(), [ia, oid](Tape& t, const Matrix& g) {
    const Matrix& y = t.nodes_[oid].value;
    Matrix ga(g.rows(), g.cols());
    for (int r = 0; r < g.rows(); ++r) {
      double dot = 0.0;
      for (int c = 0; c < g.cols(); ++c) dot += g(r, c) * y(r, c);
      for (int c = 0; c < g.cols(); ++c) ga(r, c) = y(r, c) * (g(r, c) - dot);
    }
    t.accumulate(ia, ga);
  });
}

Var Tape::sum_all(Var a) {
  check_mine(a, "sum_all");
  const Matrix& av = a.value();
  Matrix out(1, 1);
  for (int r = 0; r < av.rows(); ++r)
    for (int c = 0; c < av.cols(); ++c) out(0, 0) += av(r, c);
  const int ia = a.id();
  return make_node(std::move(out), a.requires_grad(), [ia](Tape& t, const Matrix& g) {
    const Matrix& x = t.nodes_[ia].value;
    t.accumulate(ia, Matrix::full(x.rows(), x.cols(), g(0, 0)));
  });
}

Var Tape::sum_over_axis(Var a, int axis) {
  check_mine(a, "sum_over_axis");
  if (axis != 0 && axis != 1) throw ValueError("sum_over_axis: axis must be 0 or 1");
  const Matrix& av = a.value();
  Matrix out = axis == 0 ? Matrix(1, av.cols()) : Matrix(av.rows(), 1);
  for (int r = 0; r < av.rows(); ++r)
    for (int c = 0; c < av.cols(); ++c) {
      if (axis == 0)
        out(0, c) += av(r, c);
      else
        out(r, 0) += av(r, c);
    }
  const int ia = a.id();
  return make_node(std::move(out), a.requires_grad(), [ia, axis](Tape& t, const Matrix& g) {
    const Matrix& x = t.nodes_[ia].value;
    Matrix ga(x.rows(), x.cols());
    for (int r = 0; r < x.rows(); ++r)
      for (int c = 0; c < x.cols(); ++c) ga(r, c) = axis == 0 ? g(0, c) : g(r, 0);
    t.accumulate(ia, ga);
  });
}

Var Tape::concat_cols(Var a, Var b) {
  check_mine(a, "concat_cols");
  check_mine(b, "concat_cols");
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.rows() != bv.rows())
    throw ShapeError("concat_cols: lhs " + shape_str(av.rows(), av.cols()) + ", rhs " +
                     shape_str(bv.rows(), bv.cols()));
  Matrix out(av.rows(), av.cols() + bv.cols());
  for (int r = 0; r < av.rows(); ++r) {
    for (int c = 0; c < av.cols(); ++c) out(r, c) = av(r, c);
    for (int c = 0; c < bv.cols(); ++c) out(r, av.cols() + c) = bv(r, c);
  }
  const int ia = a.id(), ib = b.id();
  const int ca = av.cols();
  return make_node(std::move(out), a.requires_grad() || b.requires_grad(),
                   [ia, ib, ca](Tape& t, const Matrix& g) {
                     if (t.nodes_[ia].requires_grad) {
                       Matrix ga(g.rows(), ca);
                       for (int r = 0; r < g.rows(); ++r)
                         for (int c = 0; c < ca; ++c) ga(r, c) = g(r, c);
                       t.accumulate(ia, ga);
                     }
                     if (t.nodes_[ib].requires_grad) {
                       Matrix gb(g.rows(), g.cols() - ca);
                       for (int r = 0; r < g.rows(); ++r)
                         for (int c = 0; c < gb.cols(); ++c) gb(r, c) = g(r, ca + c);
                       t.accumulate(ib, gb);
                     }
                   });
}

Var Tape::transpose(Var a) {
  check_mine(a, "transpose");
  const int ia = a.id();
  return make_node(lsjstn::transpose(a.value()), a.requires_grad(),
                   [ia](Tape& t, const Matrix& g) { t.accumulate(ia, lsjstn::transpose(g)); });
}

Var Tape::pair_score(Var p, Var q, Var bias, Var v) {
  check_mine(p, "pair_score");
  check_mine(q, "pair_score");
  check_mine(bias, "pair_score");
  check_mine(v, "pair_score");
  const Matrix& pv = p.value();
  const Matrix& qv = q.value();
  const Matrix& bv = bias.value();
  const Matrix& vv = v.value();
  const int f = pv.cols();
  if (qv.cols() != f)
    throw ShapeError("pair_score: p " + shape_str(pv.rows(), pv.cols()) + ", q " +
                     shape_str(qv.rows(), qv.cols()));
  if (bv.rows() != 1 || bv.cols() != f || vv.rows() != 1 || vv.cols() != f)
    throw ShapeError("pair_score: bias " + shape_str(bv.rows(), bv.cols()) + " and v " +
                     shape_str(vv.rows(), vv.cols()) + " must be 1x" + std::to_string(f));
  Matrix out(pv.rows(), qv.rows());
  for (int i = 0; i < pv.rows(); ++i)
    for (int j = 0; j < qv.rows(); ++j) {
      double s = 0.0;
      for (int k = 0; k < f; ++k) s += vv(0, k) * std::tanh(pv(i, k) + qv(j, k) + bv(0, k));
      out(i, j) = s;
    }
  const int ip = p.id(), iq = q.id(), ib = bias.id(), iv = v.id();
  const bool rg =
      p.requires_grad() || q.requires_grad() || bias.requires_grad() || v.requires_grad();
  return make_node(std::move(out), rg, [ip, iq, ib, iv](Tape& t, const Matrix& g) {
    const Matrix& P = t.nodes_[ip].value;
    const Matrix& Q = t.nodes_[iq].value;
    const Matrix& B = t.nodes_[ib].value;
    const Matrix& V = t.nodes_[iv].value;
    const int f = P.cols();
    Matrix gp(P.rows(), f), gq(Q.rows(), f), gb(1, f), gv(1, f);
    for (int i = 0; i < P.rows(); ++i)
      for (int j = 0; j < Q.rows(); ++j) {
        const double gij = g(i, j);
        if (gij == 0.0) continue;
        for (int k = 0; k < f; ++k) {
          const double th = std::tanh(P(i, k) + Q(j, k) + B(0, k));
          const double d = gij * V(0, k) * (1.0 - th * th);
          gp(i, k) += d;
          gq(j, k) += d;
          gb(0, k) += d;
          gv(0, k) += gij * th;
        }
      }
    t.accumulate(ip, gp);
    t.accumulate(iq, gq);
    t.accumulate(ib, gb);
    t.accumulate(iv, gv);
  });
}

Var Tape::row_normalize(Var a) {
  check_mine(a, "row_normalize");
  const Matrix& av = a.value();
  Matrix out(av.rows(), av.cols());
  for (int r = 0; r < av.rows(); ++r) {
    double s = 0.0;
    for (int c = 0; c < av.cols(); ++c) s += av(r, c);
    if (s != 0.0)
      for (int c = 0; c < av.cols(); ++c) out(r, c) = av(r, c) / s;
  }
  const int ia = a.id();
  const int oid = static_cast<int>(nodes_.size());
  return make_node(std::move(out), a.requires_grad(), [ia, oid](Tape& t, const Matrix& g) {
    const Matrix& x = t.nodes_[ia].value;
    const Matrix& y = t.nodes_[oid].value;
    Matrix ga(x.rows(), x.cols());
    for (int r = 0; r < x.rows(); ++r) {
      double s = 0.0, dot = 0.0;
      for (int c = 0; c < x.cols(); ++c) s += x(r, c);
      if (s == 0.0) continue;
      for (int c = 0; c < x.cols(); ++c) dot += g(r, c) * y(r, c);
      for (int c = 0; c < x.cols(); ++c) ga(r, c) = (g(r, c) - dot) / s;
    }
    t.accumulate(ia, ga);
  });
}

void Tape::backward(Var loss) {
  if (nodes_.empty()) throw Error("backward: tape is empty");
  check_mine(loss, "backward");
  if (backward_done_) throw Error("backward: already ran on this tape (use a fresh tape)");
  const Matrix& lv = loss.value();
  if (lv.rows() != 1 || lv.cols() != 1)
    throw ShapeError("backward: loss must be 1x1, got " + shape_str(lv.rows(), lv.cols()));
  backward_done_ = true;
  if (!nodes_[loss.id()].requires_grad) return;  // loss depends on no parameters
  nodes_[loss.id()].grad = Matrix::ones(1, 1);
  for (int id = loss.id(); id >= 0; --id) {
    Node& n = nodes_[id];
    if (n.grad && n.backprop) n.backprop(*this, *n.grad);
  }
}

}  // namespace lsjstn::ad
