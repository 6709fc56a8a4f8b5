// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense univariate polynomials with exact rational coefficients.

#ifndef DP4_POLYNOMIAL_HPP_
#define DP4_POLYNOMIAL_HPP_

#include <string>
#include <utility>
#include <vector>

#include "dp4/rational.hpp"

namespace dp4 {

// Coefficients in ascending order: coeffs[i] multiplies x^i.
// The zero polynomial is the empty coefficient vector; its degree() is -1.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
  UniPoly(std::initializer_list<Rat> coeffs) : c_(coeffs) { trim(); }
  explicit UniPoly(const Rat& constant) {
    if (constant != 0) c_.push_back(constant);
  }

  static UniPoly x();                     // the monomial x
  static UniPoly monomial(int k, const Rat& a = Rat(1));

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<Rat>& coeffs() const { return c_; }
  // Coefficient of x^i (0 beyond the degree).
  Rat coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : Rat(0);
  }
  Rat leading() const { return c_.empty() ? Rat(0) : c_.back(); }

  Rat eval(const Rat& t) const;

  UniPoly operator-() const;
  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly operator*(const Rat& s) const;
  UniPoly operator/(const Rat& s) const;
  bool operator==(const UniPoly& o) const { return c_ == o.c_; }
  bool operator!=(const UniPoly& o) const { return c_ != o.c_; }

  UniPoly derivative() const;
  UniPoly monic() const;  // divide by leading coefficient (zero poly stays zero)

  // p(x + a) and p(s * x).
  UniPoly shifted(const Rat& a) const;
  UniPoly scaled_arg(const Rat& s) const;
  // x^deg * p(1/x); trailing zero coefficients of p are dropped first.
  UniPoly reversed() const;

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rat> c_;
};

inline UniPoly operator*(const Rat& s, const UniPoly& p) { return p * s; }

// Quotient and remainder with deg(rem) < deg(divisor); divisor must be nonzero.
std::pair<UniPoly, UniPoly> divrem(const UniPoly& num, const UniPoly& den);

// Monic gcd by the Euclidean algorithm (gcd(0,0) = 0).
UniPoly poly_gcd(UniPoly a, UniPoly b);

// Res(p, q) by the Euclidean recurrence. Res of two constants is 1;
// Res(p, const c) = c^deg(p).
Rat resultant(const UniPoly& p, const UniPoly& q);

// Yun's algorithm: returns [(g1,1),(g2,2),...] with p = lc * prod gi^i,
// each gi squarefree and monic, pairwise coprime (gi of multiplicity i).
// Entries with gi == 1 are omitted. p must be nonzero.
std::vector<std::pair<UniPoly, int>> squarefree_decomposition(const UniPoly& p);

// Largest integer c > 0 with p/c having integer coprime coefficients,
// signed by the leading coefficient; for rational input, the unique
// positive rational c with p/c primitive integral. p nonzero.
Rat poly_content(const UniPoly& p);
UniPoly primitive_part(const UniPoly& p);  // p / poly_content(p)

// Monic g = gcd(a, b) together with s, t satisfying s*a + t*b = g.
UniPoly poly_ext_gcd(UniPoly a, UniPoly b, UniPoly* s, UniPoly* t);

// Unique polynomial of degree < pts.size() through the given (node, value)
// pairs; nodes must be distinct.
UniPoly lagrange_interpolate(const std::vector<std::pair<Rat, Rat>>& pts);

}  // namespace dp4

#endif  // DP4_POLYNOMIAL_HPP_
