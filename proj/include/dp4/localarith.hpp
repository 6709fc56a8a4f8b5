// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0
//
// Local arithmetic over the completions of Q: Hilbert symbols, isotropy of
// quadratic forms over Q_p and R, certified local point sampling on the
// surface and its fibers, evaluation of the quaternion classes at local
// points, and obstruction scans aggregating the local invariants.

#ifndef DP4_LOCALARITH_HPP_
#define DP4_LOCALARITH_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dp4/brauer.hpp"
#include "dp4/pencil.hpp"
#include "dp4/polynomial.hpp"
#include "dp4/rational.hpp"

namespace dp4 {

// A place of Q: either the real place or a finite prime.
struct Place {
  bool real = false;
  Int p = Int(0);  // the prime when finite

  // Throws std::invalid_argument unless p is prime.
  static Place finite(const Int& p);
  static Place real_place();

  bool operator==(const Place& o) const { return real == o.real && p == o.p; }
  bool operator!=(const Place& o) const { return !(*this == o); }
  bool operator<(const Place& o) const {  // real place sorts first
    if (real != o.real) return real;
    return p < o.p;
  }
  std::string to_string() const;
};

// A certified point of the surface over one completion.
//
// Finite place: coords are integers in [0, p^precision), not all divisible
// by p, both quadrics vanish modulo p^precision, and some 2x2 minor of the
// Jacobian has p-adic valuation e with 2e + 1 <= precision (e = 0 is the
// classical smooth case), so the point lifts to Q_p by the strong form of
// Hensel's lemma.
//
// Real place: either `exact` is set and coords satisfy both quadrics
// exactly, or `curve` parameterizes a rational curve lying on one pencil
// member, so that the two quadrics restrict to proportional univariate
// polynomials along it; `constraint` is the squarefree part of that common
// restriction and has exactly one (simple) root in the isolating interval
// [lo, hi], with sign changes at the endpoints. coords then hold the
// rational approximation at the interval midpoint and `precision` counts
// certified interval-width bits (width <= 2^-precision).
struct LocalPoint {
  Place place;
  Vec5 coords = Vec5::Zero();
  long precision = 0;
  bool exact = false;                 // real place: coords lie on X exactly
  std::array<UniPoly, 5> curve = {};  // real place: sampling certificate
  UniPoly constraint;                 // real place: vanishing locus on curve
  Rat lo = Rat(0), hi = Rat(0);       // isolating interval for the parameter
};

// An element of (1/2)Z / Z: the local invariant of a class of order <= 2.
struct Invariant {
  bool half = false;  // false: 0, true: 1/2

  bool operator==(const Invariant& o) const { return half == o.half; }
  bool operator!=(const Invariant& o) const { return half != o.half; }
};

// Hilbert symbol (a, b)_v in {+1, -1}: +1 exactly when z^2 = a x^2 + b y^2
// has a nontrivial solution over the completion at v. Bilinear in square
// classes and symmetric; the product over all places is 1. At odd p the
// tame formula applies; at p = 2 the unit-mod-8 closed form; at the real
// place the symbol is -1 iff both arguments are negative. Throws
// std::invalid_argument when a or b is zero.
int hilbert(const Rat& a, const Rat& b, const Place& v);

// Whether a is a square in the completion at v (a != 0).
bool is_local_square(const Rat& a, const Place& v);

// Exact diagonalization of a symmetric Gram matrix by congruence: returns
// diagonal entries d_i with U^T G U = diag(d), including zeros for the
// radical. Input must be symmetric (std::invalid_argument otherwise).
std::vector<Rat> diagonalize_gram(const MatX& gram);

// Isotropy of the diagonal quadratic form sum d_i x_i^2 over the completion
// at v. Zero entries are ignored; at least three nonzero entries are
// required (std::invalid_argument otherwise). Finite places use the
// discriminant/Hasse-invariant criterion (rank >= 5 is always isotropic);
// the real place checks for mixed signs.
bool locally_solvable(const std::vector<Rat>& diag, const Place& v);

// Result of a local point search: the points found plus a note when the
// budget ran out before `count` points were certified (empty note on full
// success).
struct LocalSample {
  std::vector<LocalPoint> points;
  std::string note;
};

// Samples up to `count` certified points of the surface over the completion
// at v. Finite places: residue search for common zeros mod p (branch-lifting
// through singular residue points when necessary, since a smooth surface can
// have no smooth reduction at a bad prime), certified once some 2x2 Jacobian
// minor has p-adic valuation e with 2e + 1 <= the working level, followed by
// Newton lifting to the requested precision; distinct points are distinct
// modulo p^precision. Real place: rational curves on the first
// pencil member are sliced against the second, with real roots isolated and
// refined to `precision` bits; when a definite pencil member proves that no
// real points exist, the note says so. Deterministic for fixed arguments.
// Requires a smooth surface (std::invalid_argument otherwise).
LocalSample sample_local_points(const Pencil& p, const Place& v, int count,
                                long precision);

// Local invariant of the class represented by `alg` at the certified point:
// 0 when hilbert(eps, f(pt), v) = +1 and 1/2 otherwise, where f is the
// represented rational function (norm of the numerator form over its field,
// divided by a square, for degree-2 numerators; product of the numerator
// and denominator forms for ratio representatives). Representatives are
// tried in order (numerators[0], then the stored companions) until one has
// a value whose square class is determined at the point's precision;
// nullopt when none does (caller should resample at higher precision).
std::optional<Invariant> evaluate(const CyclicAlgebraRep& alg,
                                  const LocalPoint& pt);

// Per-place record of an obstruction scan.
struct PlaceReport {
  Place place;
  // Distinct observed invariant tuples (one entry per generator).
  std::vector<std::vector<Invariant>> tuples;
  int samples = 0;
  std::string certificate;  // "sampled", "positive eps", "good reduction"
};

// Outcome of a Brauer-Manin scan.
struct BmVerdict {
  // One of: "obstructed (sampled)", "no obstruction at samples",
  // "inconclusive at budget", "trivially unobstructed by Br".
  std::string verdict;
  std::vector<PlaceReport> places;
  std::string note;
};

// Samples local invariants of every generator at the relevant places (the
// real place, 2, and odd primes up to place_budget dividing the
// characteristic-form discriminant, the eps-class norms, or the generator
// data), spot-checks three off-list places for the expected constant zero,
// and aggregates: if some generator forces total invariant 1/2 for every
// sampled adelic combination the verdict is "obstructed (sampled)"; if a
// combination totals zero for all generators simultaneously it is "no
// obstruction at samples"; non-constant or undecided data yield
// "inconclusive at budget". Order-1 reports are "trivially unobstructed by
// Br" without sampling.
BmVerdict bm_scan(const Pencil& p, const BrauerReport& report,
                  long place_budget, int sample_budget);

// Tri-state answer for fiber solvability questions.
enum class Solvability { kSolvable, kInsolvable, kUnknown };

// Existence of a point over the completion at v on the fiber of the
// fibration at parameter t (the hyperplane section l0 - t*l1 = 0). Finite
// places: residue search with Hensel certificates, branching through
// singular residue points up to the requested precision; kInsolvable only
// when the residue tree dies out (a complete certificate), kUnknown when
// the precision or branching budget is exhausted first. Real place: a
// positive- or negative-definite member of the restricted pencil certifies
// kInsolvable; otherwise random plane slices with exact real-root isolation
// search for a point, and failure to find one is kUnknown. Throws
// std::invalid_argument when the forms degenerate at t.
Solvability fiber_local_solvability(const Pencil& p, const Fibration& fib,
                                    const Rat& t, const Place& v,
                                    long precision);

// Verifies the reciprocity law at an exact rational point of the surface:
// for every generator, the sum of local invariants over all places (only
// finitely many are nonzero; the rest are certified trivial) must vanish.
// Each finite invariant is computed twice -- once by direct Hilbert symbols
// on the exact values and once through `evaluate` at the induced local
// point -- and any mismatch fails the check. Returns false when a
// generator's representatives all vanish at the point. Throws
// std::invalid_argument if the point does not lie on the surface.
bool reciprocity_check(const Pencil& p, const BrauerReport& report,
                       const Vec5& global_point);

}  // namespace dp4

#endif  // DP4_LOCALARITH_HPP_
