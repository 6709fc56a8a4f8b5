// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DP4_BRAUER_HPP_
#define DP4_BRAUER_HPP_

// Brauer group computation for smooth degree-4 del Pezzo surfaces given as
// pencils of quadrics: the degree-2 subscheme condition on the degeneracy
// scheme, the five-step order decision, cyclic-algebra generators, vertical
// genus-1 fibrations, per-fiber smoothness scans, and the projection
// fibration attached to a rational surface point in the order-4 case.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dp4/linalg.hpp"
#include "dp4/numberfield.hpp"
#include "dp4/pencil.hpp"
#include "dp4/quadric.hpp"
#include "dp4/rational.hpp"

namespace dp4 {

// A degree-2 rational subscheme of the degeneracy scheme passing the three
// tests: every eps nonsquare in its residue field, the product of the norms
// of the eps values a rational square, and (single degree-2 point case) a
// rational square class a with a * eps a square in the residue field.
struct StarScheme {
  std::vector<ClosedPoint> points;  // one degree-2 point or two degree-1 ones
  std::vector<int> indices;         // positions within the degeneracy scheme
  std::vector<NfElem> eps;          // discriminants, parallel to points
  SquareClassQ norm_product_class{Int(1)};
  SquareClassQ rational_eps{Int(1)};  // the common class a with L = Q(sqrt a)

  int total_degree() const;
  std::string to_string() const;
};

// One factor of the numerator of a cyclic-algebra representative: a linear
// form over the residue field whose norm down to Q enters the product. A
// null field means the form is already rational.
struct NumeratorForm {
  NfVec5 form;
  FieldPtr field;
};

// (Q(sqrt eps)/Q, Norm(numerator) / denominator^exponent) as an element of
// the Brauer group of the function field, unramified on the surface.
// numerators[0] is the representative; any later entries are companion
// forms defining the same class (second tangent sheets), kept so that
// evaluation at a point where the first numerator vanishes can substitute
// an equivalent one.
struct CyclicAlgebraRep {
  SquareClassQ eps{Int(1)};
  std::vector<NumeratorForm> numerators;
  Vec5 denominator = Vec5::Zero();
  int denominator_exponent = 2;  // 1 for the two-point ratio form l0/l1
};

// How the defining algebra of the source scheme restricts to the fibration
// coordinate: kRatio means (eps, l0/l1); kNorm means
// (eps, (l0^2 - disc*l1^2)/l1^2), arising from a degree-2 point.
enum class FibrationKind { kRatio, kNorm };

// A rational map X --> P^1, x |-> [l0(x) : l1(x)], whose generic fiber is a
// hyperplane section (a genus-1 curve) and for which the attached algebra
// is vertical.
struct Fibration {
  Vec5 l0 = Vec5::Zero();
  Vec5 l1 = Vec5::Zero();
  FibrationKind kind = FibrationKind::kRatio;
  Rat disc;            // kNorm only: rational d with numerator l0^2 - d*l1^2
  StarScheme source;   // the scheme the fibration witnesses (may be empty)
  bool whole_group_vertical = false;
};

// Result of testing one fiber X ∩ V(l0 - t*l1) for smoothness.
struct FiberDiagnostic {
  Rat t;
  bool smooth = false;
  // Characteristic binary quartic of the restricted pencil,
  // sum_j quartic[j] lam^(4-j) mu^j; smooth iff nonzero and squarefree.
  std::array<Rat, 5> quartic{};
};

// Output of the five-step decision: the order of Br X / Br_0 X together
// with generators, fibrations, certificates, and soft-failure flags.
struct BrauerReport {
  int order = 1;
  std::vector<CyclicAlgebraRep> generators;  // 0, 1, or 3 entries
  std::vector<Fibration> fibrations;         // parallel to generators
  std::vector<StarScheme> certificates;      // qualifying schemes, chosen first
  std::optional<ClosedPoint> witness;        // outside point with nonsquare eps
  std::optional<NfElem> witness_eps;
  std::vector<std::string> hypothesis_flags;  // soft failures, e.g. search
  bool generators_available = true;
};

// Discriminants eps_T for every closed point of the degeneracy scheme, in
// scheme order: specialize, take the rank-4 quadric, and evaluate the fixed
// minor convention. Throws what those steps throw on degenerate input.
std::vector<NfElem> eps_for_scheme(const Pencil& p, const DegeneracyScheme& ds);

// True iff the product over the whole scheme of Norm(eps_T) is a rational
// square; holds for every smooth pencil (global parity relation).
bool product_norm_check(const DegeneracyScheme& ds, const std::vector<NfElem>& eps);

// All degree-2 rational subschemes passing the three tests, pairs of
// degree-1 points first (lexicographic by index pair), then single degree-2
// points by index. eps must be parallel to ds.points.
std::vector<StarScheme> enumerate_star(const DegeneracyScheme& ds,
                                       const std::vector<NfElem>& eps);

// Smooth point whose tangent form is supported on as few coordinates as
// possible: for each coordinate pair {i, j} in lexicographic order,
// searches the plane where the polar form lies in span{x_i, x_j} for a
// rational point of the quadric off the vertex line. Intended for quadrics
// with rational entries; returns nullopt when every support pair fails
// within the height bound.
std::optional<TangentDatum> sparse_tangent(const Rank4Quadric& q, int height_bound = 20);

// Cyclic-algebra representative of the class attached to a StarScheme,
// given tangent data at smooth points of the degenerate quadrics (one datum
// per scheme point, in scheme order). Two degree-1 points give
// (eps, l0/l1) with denominator l1 and exponent 1; a degree-2 point gives
// (eps, Norm(l_T)/x_i^2) with x_i the first coordinate form not
// proportional to the tangent form. Throws std::invalid_argument on
// missing or mismatched tangent data.
CyclicAlgebraRep build_algebra(const StarScheme& ss,
                               const std::vector<TangentDatum>& tangents);

// Vertical fibration attached to a StarScheme: a degree-1 pair maps by the
// two tangent forms; a degree-2 point with residue field Q(sqrt d) splits
// its tangent form as l0 + sqrt(d)*l1 with l0, l1 rational and maps by
// those. Throws std::invalid_argument when the tangent choice degenerates
// (dependent or vanishing forms) — retry with another point.
Fibration vertical_fibration(const StarScheme& ss,
                             const std::vector<TangentDatum>& tangents);

// For each sample t, restricts the pencil to the hyperplane
// V(l0 - t*l1), computes the characteristic binary quartic of the
// restricted pencil exactly, and reports the fiber smooth iff the quartic
// is nonzero and squarefree as a binary form (repeated root at infinity
// included). Smooth fibers are geometrically irreducible genus-1 curves.
std::vector<FiberDiagnostic> fiber_scan(const Pencil& p, const Fibration& fib,
                                        const std::vector<Rat>& samples);

// Order-4 case: given a rational point of the surface and tangent data at
// that same point on the three degenerate quadrics of the certificate
// triple, returns the projection fibration (l0, l1). The third tangent
// form always lies in the span of the first two (checked; violation is a
// logic error). Throws std::invalid_argument when the point is not on the
// surface or the tangent data do not share it, and std::domain_error on a
// degenerate tangency (dependent l0, l1) — retry with another point.
Fibration order4_projection(const Pencil& p, const Vec5& point,
                            const std::vector<TangentDatum>& tangents);

// The five-step decision. Requires a smooth pencil (std::domain_error
// otherwise). Steps: (1) characteristic form and degeneracy scheme; (2) a
// point of degree >= 4 forces order 1; (3) three degree-1 points with
// nonsquare eps in a common square class give order 4 with the three ratio
// generators; (4) otherwise a qualifying scheme plus an outside point with
// nonsquare eps gives order 2 with the cyclic algebra A_T; (5) otherwise
// order 1. Point searches respect height_bound; exhaustion downgrades to a
// flagged report without generators, never a different order.
BrauerReport brauer_group(const Pencil& p, int height_bound = 50);

}  // namespace dp4

#endif  // DP4_BRAUER_HPP_
