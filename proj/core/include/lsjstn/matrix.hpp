#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "lsjstn/errors.hpp"

namespace lsjstn {

/// Dense row-major matrix of doubles. The value type shared by the whole
/// library; all differentiable computation happens through ad::Tape, this
/// class only stores and does a few plain (non-recorded) operations.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {
    if (rows < 0 || cols < 0) throw ShapeError("Matrix: negative dimension " + shape_str(rows, cols));
  }

  static Matrix zeros(int rows, int cols) { return Matrix(rows, cols); }

  static Matrix full(int rows, int cols, double v) {
    Matrix m(rows, cols);
    for (auto& x : m.data_) x = v;
    return m;
  }

  static Matrix ones(int rows, int cols) { return full(rows, cols, 1.0); }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  bool all_finite() const {
    for (double x : data_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Plain (non-recorded) product, used outside the autodiff path.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul: lhs " + shape_str(a.rows(), a.cols()) + ", rhs " +
                     shape_str(b.rows(), b.cols()));
  Matrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

}  // namespace lsjstn
