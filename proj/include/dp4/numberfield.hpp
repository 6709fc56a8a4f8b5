// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0
//
// Number fields Q[θ]/(m) of degree 1..5 with exact element arithmetic,
// norms, traces, square testing and square roots.

#ifndef DP4_NUMBERFIELD_HPP_
#define DP4_NUMBERFIELD_HPP_

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dp4/polynomial.hpp"

namespace dp4 {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

class NumberField {
 public:
  // min_poly must be monic with integer coefficients, irreducible over Q,
  // of degree 1..5; throws std::invalid_argument otherwise.
  static FieldPtr create(UniPoly min_poly);

  // Q presented with min_poly y (θ = 0).
  static FieldPtr rationals();

  // Accepts any monic irreducible rational polynomial p, rescales the
  // generator so the minimal polynomial becomes integral, and returns the
  // field together with the element that is a root of the original p.
  static std::pair<FieldPtr, class NfElem> adjoin_root(const UniPoly& p);

  int degree() const { return min_.degree(); }
  const UniPoly& min_poly() const { return min_; }
  std::string to_string() const { return min_.to_string("y"); }

 private:
  explicit NumberField(UniPoly m) : min_(std::move(m)) {}
  UniPoly min_;
};

// Element of a number field, stored as coordinates over the power basis
// 1, θ, ..., θ^{d-1}. A default-constructed or Rat-constructed element has
// no field attached and behaves as a plain rational; it coerces into any
// field it meets in arithmetic. Elements of two structurally different
// fields cannot be combined.
class NfElem {
 public:
  NfElem() : coords_{Rat(0)} {}
  explicit NfElem(const Rat& c) : coords_{c} {}
  explicit NfElem(long c) : coords_{Rat(c)} {}
  NfElem(FieldPtr f, std::vector<Rat> coords);
  NfElem(FieldPtr f, const Rat& c);

  // The generator θ of a field (requires degree ≥ 2... degree 1 gives the
  // root of the linear min_poly, i.e. a rational).
  static NfElem generator(const FieldPtr& f);

  const FieldPtr& field() const { return field_; }
  int degree() const { return field_ ? field_->degree() : 1; }
  const std::vector<Rat>& coords() const { return coords_; }
  Rat coord(int i) const {
    return i < static_cast<int>(coords_.size()) ? coords_[i] : Rat(0);
  }

  bool is_zero() const;
  bool is_rational() const;       // lies in Q ⊂ κ
  Rat rational_value() const;     // requires is_rational()

  NfElem operator-() const;
  NfElem operator+(const NfElem& o) const;
  NfElem operator-(const NfElem& o) const;
  NfElem operator*(const NfElem& o) const;
  NfElem operator/(const NfElem& o) const;
  NfElem& operator+=(const NfElem& o) { return *this = *this + o; }
  NfElem& operator-=(const NfElem& o) { return *this = *this - o; }
  NfElem& operator*=(const NfElem& o) { return *this = *this * o; }
  NfElem& operator/=(const NfElem& o) { return *this = *this / o; }
  bool operator==(const NfElem& o) const;
  bool operator!=(const NfElem& o) const { return !(*this == o); }

  NfElem inverse() const;  // throws on zero
  NfElem pow(long e) const;

  std::string to_string() const;

 private:
  FieldPtr field_;              // null means plain rational
  std::vector<Rat> coords_;     // length degree()
};

inline NfElem operator+(const Rat& a, const NfElem& x) { return NfElem(a) + x; }
inline NfElem operator-(const Rat& a, const NfElem& x) { return NfElem(a) - x; }
inline NfElem operator*(const Rat& a, const NfElem& x) { return NfElem(a) * x; }

// p evaluated at x by Horner's rule; p has rational coefficients.
NfElem nf_eval(const UniPoly& p, const NfElem& x);

// Norm over Q: Res(min_poly, poly of x). Multiplicative; 0 for x = 0.
Rat nf_norm(const NfElem& x);

// Trace over Q (diagonal of the multiplication-by-x matrix).
Rat nf_trace(const NfElem& x);

// Characteristic polynomial of multiplication by x: monic of degree d,
// computed by interpolating nf_norm(z - x).
UniPoly nf_charpoly(const NfElem& x);

// True iff x = y² for some y in the field. Squares are detected by the
// norm-polynomial method: the norm of z² - x (with generator shifts to
// reach a squarefree norm) factors over Q iff z² - x splits. A Legendre
// prefilter at good primes rejects most nonsquares early.
bool nf_is_square(const NfElem& x);

// A square root of x when one exists in the field.
std::optional<NfElem> nf_sqrt(const NfElem& x);

// For x in a field of degree ≤ 2 whose norm is a rational square: the
// square class a with a·x a square in the field (a = 1 when x is itself a
// square). Candidates are trace(x) ∓ 2s with s the positive square root of
// the norm, each verified by nf_is_square before being returned. Absent
// when the norm is not a square, no candidate verifies, or degree > 2.
std::optional<SquareClassQ> rational_representative(const NfElem& x);

}  // namespace dp4

#endif  // DP4_NUMBERFIELD_HPP_
