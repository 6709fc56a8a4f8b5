// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0
//
// Pencils of quadrics in P^4: the characteristic binary quintic, the
// degeneracy scheme with its residue fields, smoothness validation, and
// simultaneous block diagonalization over Q.

#ifndef DP4_PENCIL_HPP_
#define DP4_PENCIL_HPP_

#include <array>
#include <string>
#include <vector>

#include "dp4/linalg.hpp"
#include "dp4/numberfield.hpp"
#include "dp4/polynomial.hpp"

namespace dp4 {

// 5x5 symmetric Gram matrix over Q.
class SymMat5 {
 public:
  SymMat5() : e_(Mat5::Zero()) {}
  // Throws std::invalid_argument unless e is symmetric.
  explicit SymMat5(Mat5 e);

  const Mat5& mat() const { return e_; }
  const Rat& operator()(int i, int j) const { return e_(i, j); }

 private:
  Mat5 e_;
};

// The pencil {lam*m + mu*m_tilde} of quadrics in P^4.
struct Pencil {
  SymMat5 m;
  SymMat5 m_tilde;
};

// Binary quintic form sum_j c[j] lam^(5-j) mu^j.
struct BinaryQuintic {
  std::array<Rat, 6> c{};

  bool is_zero() const;
  Rat eval(const Rat& lam, const Rat& mu) const;
  // f(t, 1) as a polynomial in the affine coordinate t = lam/mu; its
  // degree drops below 5 exactly when mu divides f.
  UniPoly dehomogenized() const;
  std::string to_string() const;
  bool operator==(const BinaryQuintic& o) const { return c == o.c; }
  bool operator!=(const BinaryQuintic& o) const { return !(*this == o); }
};

// A closed point of the degeneracy scheme on the projective line with
// affine coordinate t = lam/mu.
struct ClosedPoint {
  FieldPtr field;            // residue field of the point
  NfElem coord;              // t, when finite; unused at infinity
  bool at_infinity = false;  // the point [1:0]
  int degree = 1;            // = field degree

  std::string to_string() const;
};

// The degeneracy scheme: pairwise distinct closed points whose degrees
// sum to 5. Finite points come first, in the factor order of
// factor_over_q (ascending degree, then coefficient order); the point at
// infinity, when present, is last.
struct DegeneracyScheme {
  std::vector<ClosedPoint> points;

  std::vector<int> degree_sequence() const;
};

struct SmoothnessReport {
  bool smooth = false;
  std::string diagnostic;  // names the failing condition when not smooth
};

// Change of basis u over Q making both Gram matrices simultaneously block
// diagonal; block sizes equal the degree sequence of the degeneracy
// scheme, in scheme order.
struct BlockDiagonalization {
  Mat5 u;          // invertible; columns grouped per closed point
  Pencil blocks;   // {u^T m u, u^T m_tilde u}, block diagonal
  std::vector<int> sizes;
};

// det(lam*m + mu*m_tilde) as a binary quintic, computed exactly by
// interpolation. Throws std::domain_error when the determinant vanishes
// identically (degenerate pencil).
BinaryQuintic char_form(const Pencil& p);

// Splits the quintic into closed points: irreducible factors of f(t, 1)
// give finite points with their residue fields; a simple root at infinity
// (mu | f, mu^2 does not) gives the at-infinity point. Throws
// std::invalid_argument on the zero form and std::domain_error on any
// repeated factor, including mu^2 | f — the surface is singular.
DegeneracyScheme degeneracy_scheme(const BinaryQuintic& f);

// True iff the characteristic form is nonzero and squarefree (as a binary
// form) and every degenerate Gram matrix has rank exactly 4 over its
// residue field. Never throws; the diagnostic names the first failing
// condition.
SmoothnessReport smoothness_check(const Pencil& p);

// Gram matrix t*m + m_tilde (finite t) or m (at infinity) with entries in
// the residue field of T. Throws std::domain_error unless the rank is
// exactly 4.
NfMat5 specialize(const Pencil& p, const ClosedPoint& t);

// Simultaneous block diagonalization over Q. Column w_{i,j} of u is the
// coordinatewise trace of theta_j^i * v_j, where v_j spans the kernel of
// the degenerate Gram matrix at the j-th point and theta_j = t(T_j); the
// sum over conjugates makes the columns rational while preserving the
// span of the conjugate kernels. Requires a smooth surface; closed points
// of degree 4 or 5 are rejected (std::domain_error).
BlockDiagonalization block_diagonalize(const Pencil& p);

}  // namespace dp4

#endif  // DP4_PENCIL_HPP_
