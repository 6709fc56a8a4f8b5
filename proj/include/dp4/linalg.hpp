// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0
//
// Eigen dense types over exact scalars (Rat and NfElem) plus exact
// elimination routines (rank, determinant, kernel, solve) that use no
// pivoting-by-magnitude and no floating point anywhere.

#ifndef DP4_LINALG_HPP_
#define DP4_LINALG_HPP_

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "dp4/numberfield.hpp"
#include "dp4/rational.hpp"

namespace Eigen {

template <>
struct NumTraits<dp4::Rat> : GenericNumTraits<dp4::Rat> {
  using Real = dp4::Rat;
  using NonInteger = dp4::Rat;
  using Nested = dp4::Rat;
  using Literal = dp4::Rat;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 40,
    MulCost = 60,
  };
  static inline Real epsilon() { return dp4::Rat(0); }
  static inline Real dummy_precision() { return dp4::Rat(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<dp4::NfElem> : GenericNumTraits<dp4::NfElem> {
  using Real = dp4::NfElem;
  using NonInteger = dp4::NfElem;
  using Nested = dp4::NfElem;
  using Literal = dp4::NfElem;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 16,
    AddCost = 120,
    MulCost = 400,
  };
  static inline Real epsilon() { return dp4::NfElem(dp4::Rat(0)); }
  static inline Real dummy_precision() { return dp4::NfElem(dp4::Rat(0)); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace dp4 {

using Mat5 = Eigen::Matrix<Rat, 5, 5>;
using Vec5 = Eigen::Matrix<Rat, 5, 1>;
using MatX = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using VecX = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;
using NfMat5 = Eigen::Matrix<NfElem, 5, 5>;
using NfVec5 = Eigen::Matrix<NfElem, 5, 1>;
using NfMatX = Eigen::Matrix<NfElem, Eigen::Dynamic, Eigen::Dynamic>;
using NfVecX = Eigen::Matrix<NfElem, Eigen::Dynamic, 1>;

// Exact rank by Gaussian elimination over the scalar's fraction field;
// pivots are any nonzero entry (exact zero tests, no magnitudes).
template <typename Derived>
int exact_rank(const Eigen::MatrixBase<Derived>& m_in) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m = m_in;
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (!(m(r, col) == Scalar(0))) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int c = 0; c < cols; ++c) std::swap(m(piv, c), m(rank, c));
    for (int r = rank + 1; r < rows; ++r) {
      if (m(r, col) == Scalar(0)) continue;
      Scalar f = m(r, col) / m(rank, col);
      for (int c = col; c < cols; ++c) m(r, c) -= f * m(rank, c);
    }
    ++rank;
  }
  return rank;
}

// Exact determinant of a square matrix.
template <typename Derived>
typename Derived::Scalar exact_det(const Eigen::MatrixBase<Derived>& m_in) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m = m_in;
  const int n = static_cast<int>(m.rows());
  Scalar det = Scalar(1);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (!(m(r, col) == Scalar(0))) {
        piv = r;
        break;
      }
    if (piv < 0) return Scalar(0);
    if (piv != col) {
      for (int c = col; c < n; ++c) std::swap(m(piv, c), m(col, c));
      det = -det;
    }
    det = det * m(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (m(r, col) == Scalar(0)) continue;
      Scalar f = m(r, col) / m(col, col);
      for (int c = col; c < n; ++c) m(r, c) -= f * m(col, c);
    }
  }
  return det;
}

// Basis of the right kernel {v : m v = 0}, via reduced row echelon form.
template <typename Derived>
std::vector<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>
exact_kernel(const Eigen::MatrixBase<Derived>& m_in) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m = m_in;
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (!(m(r, col) == Scalar(0))) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int c = 0; c < cols; ++c) std::swap(m(piv, c), m(rank, c));
    Scalar inv = Scalar(1) / m(rank, col);
    for (int c = col; c < cols; ++c) m(rank, c) = m(rank, c) * inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m(r, col) == Scalar(0)) continue;
      Scalar f = m(r, col);
      for (int c = col; c < cols; ++c) m(r, c) -= f * m(rank, c);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (int col = 0; col < cols; ++col) {
    if (is_pivot[col]) continue;
    Vec v(cols);
    for (int i = 0; i < cols; ++i) v(i) = Scalar(0);
    v(col) = Scalar(1);
    for (int i = 0; i < rank; ++i) v(pivot_col[i]) = -m(i, col);
    basis.push_back(std::move(v));
  }
  return basis;
}

// One solution of m x = b if the system is consistent.
template <typename Derived, typename VecDerived>
std::optional<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>
exact_solve(const Eigen::MatrixBase<Derived>& m_in,
            const Eigen::MatrixBase<VecDerived>& b_in) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const int rows = static_cast<int>(m_in.rows());
  const int cols = static_cast<int>(m_in.cols());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(rows, cols + 1);
  m.block(0, 0, rows, cols) = m_in;
  m.col(cols) = b_in;
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (!(m(r, col) == Scalar(0))) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int c = 0; c <= cols; ++c) std::swap(m(piv, c), m(rank, c));
    Scalar inv = Scalar(1) / m(rank, col);
    for (int c = col; c <= cols; ++c) m(rank, c) = m(rank, c) * inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m(r, col) == Scalar(0)) continue;
      Scalar f = m(r, col);
      for (int c = col; c <= cols; ++c) m(r, c) -= f * m(rank, c);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (int r = rank; r < rows; ++r)
    if (!(m(r, cols) == Scalar(0))) return std::nullopt;  // inconsistent
  Vec x(cols);
  for (int i = 0; i < cols; ++i) x(i) = Scalar(0);
  for (int i = 0; i < rank; ++i) x(pivot_col[i]) = m(i, cols);
  return x;
}

// Congruence transform Pᵀ A P (change of quadratic-form basis).
template <typename DerivedA, typename DerivedP>
auto congruence(const Eigen::MatrixBase<DerivedA>& a,
                const Eigen::MatrixBase<DerivedP>& p) {
  return (p.transpose() * a * p).eval();
}

}  // namespace dp4

#endif  // DP4_LINALG_HPP_
