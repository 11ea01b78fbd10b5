#pragma once
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "flatspin/numeric.hpp"

namespace flatspin {

using IntVector = std::vector<Int>;
using RatVector = std::vector<Rat>;

/// Dense integer matrix, row-major, arbitrary-precision entries.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<Int>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_)
        fail("IntMatrix: ragged initializer");
      for (const auto& v : row)
        a_.push_back(v);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  IntVector row(std::size_t i) const {
    return IntVector(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
  }
  void set_row(std::size_t i, const IntVector& v) {
    for (std::size_t j = 0; j < cols_; ++j)
      (*this)(i, j) = v[j];
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < cols_; ++k)
      std::swap((*this)(i, k), (*this)(j, k));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < rows_; ++k)
      std::swap((*this)(k, i), (*this)(k, j));
  }
  /// row i += c * row j
  void add_row(std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < cols_; ++k)
      (*this)(i, k) += c * (*this)(j, k);
  }
  /// col i += c * col j
  void add_col(std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < rows_; ++k)
      (*this)(k, i) += c * (*this)(k, j);
  }
  void negate_row(std::size_t i) {
    for (std::size_t k = 0; k < cols_; ++k)
      (*this)(i, k) = -(*this)(i, k);
  }

  IntMatrix transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> a_;
};

inline IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows())
    fail("IntMatrix product: dimension mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Int& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        c(i, j) += aik * b(k, j);
    }
  return c;
}

inline IntVector operator*(const IntMatrix& a, const IntVector& x) {
  if (a.cols() != x.size())
    fail("IntMatrix * vector: dimension mismatch");
  IntVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      y[i] += a(i, j) * x[j];
  return y;
}

inline RatVector operator*(const IntMatrix& a, const RatVector& x) {
  if (a.cols() != x.size())
    fail("IntMatrix * vector: dimension mismatch");
  RatVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0)
        y[i] += Rat(a(i, j)) * x[j];
  return y;
}

inline Int dot(const IntVector& u, const IntVector& v) {
  if (u.size() != v.size())
    fail("dot: dimension mismatch");
  Int s = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    s += u[i] * v[i];
  return s;
}

inline Rat dot(const IntVector& u, const RatVector& v) {
  if (u.size() != v.size())
    fail("dot: dimension mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] != 0)
      s += Rat(u[i]) * v[i];
  return s;
}

}  // namespace flatspin
