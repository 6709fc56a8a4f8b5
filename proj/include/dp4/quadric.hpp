// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0
//
// Rank-4 quadrics in P^4 over a number field: vertex (the unique singular
// point), discriminant class, smooth-point search, tangent forms, and the
// exact normal form  c*Q = l1*l2 - l3^2 + eps*l4^2  attached to a tangent
// hyperplane.  These are the per-degeneracy-point computations used to
// assemble quaternion representatives for the surface's Brauer classes.

#pragma once

#include <optional>

#include "dp4/linalg.hpp"
#include "dp4/numberfield.hpp"

namespace dp4 {

// A quadric hypersurface in P^4 whose symmetric Gram matrix has rank exactly
// 4.  The radical of the associated bilinear form is one-dimensional and its
// projectivization is the unique singular point of the quadric (the vertex of
// the cone).  Invariants: gram is symmetric of rank 4, gram * vertex = 0, and
// the first nonzero coordinate of vertex is 1.
struct Rank4Quadric {
  NfMat5 gram;
  NfVec5 vertex;
};

// A smooth point on a rank-4 quadric together with the linear form cutting
// out the tangent hyperplane there.  Invariants: the point lies on the
// quadric, differs from the vertex, and form is proportional to gram * point,
// scaled so that all rational coordinates of its entries are integers with
// overall content 1 and the first nonzero one is positive.
struct TangentDatum {
  NfVec5 point;
  NfVec5 form;
};

// Exact decomposition  c * Q = l1*l2 - l3^2 + eps * l4^2  of the quadratic
// form Q(x) = x^T gram x, where l1 is the tangent form at a smooth base
// point P.  The four linear forms are independent; l1, l3 and l4 vanish at P
// while l2(P) != 0; c is a nonzero scalar; and eps represents the
// discriminant class of the quadric (nonzero, well defined up to squares).
struct NormalForm {
  NfElem c;
  NfVec5 l1;
  NfVec5 l2;
  NfVec5 l3;
  NfVec5 l4;
  NfElem eps;
};

// Generator of the radical of a symmetric matrix of rank exactly 4,
// normalized so that its first nonzero coordinate is 1.  Throws
// std::domain_error if the rank differs from 4 and std::invalid_argument if
// the matrix is not symmetric.
NfVec5 vertex(const NfMat5& gram);

// Bundles a Gram matrix with its computed vertex, validating the rank-4 and
// symmetry requirements (same exceptions as vertex()).
Rank4Quadric rank4_quadric(const NfMat5& gram);

// Determinant of the restriction of the Gram matrix to the coordinate
// hyperplane x_i = 0 for the smallest index i such that the hyperplane does
// not contain the vertex (i.e. vertex[i] != 0).  The result is nonzero and,
// as a square class, independent of the choice of admissible hyperplane.
NfElem discriminant_eps(const Rank4Quadric& q);

// Restriction determinant for one specific coordinate hyperplane x_i = 0.
// Requires vertex[i] != 0 (throws std::invalid_argument otherwise).  Any two
// admissible indices give values differing by a nonzero square factor.
NfElem discriminant_eps_at(const Rank4Quadric& q, int i);

// Deterministic bounded search for a point on the quadric other than the
// vertex (every such point is smooth).  Candidates are enumerated in
// increasing height level 0, 1, ..., height_bound: one coordinate is pinned
// to 1, those before it to 0, three range over field elements whose rational
// coordinates n/d satisfy max(|n|, d) <= level, and the remaining coordinate
// is solved from the resulting quadratic equation whenever its discriminant
// is a square in the field.  Returns the first point found, scaled integral
// and coprime with positive leading coordinate; std::nullopt when the
// bounded search is exhausted (the quadric may still have points of larger
// height, so absence is a soft failure).
std::optional<NfVec5> find_smooth_point(const Rank4Quadric& q, int height_bound);

// Tangent datum at a given smooth point p of the quadric: the form is
// gram * p rescaled as described in TangentDatum.  Throws
// std::invalid_argument if p is zero, does not lie on the quadric, or is the
// vertex (where no tangent hyperplane exists).
TangentDatum tangent_form(const Rank4Quadric& q, const NfVec5& p);

// Normal form c*Q = l1*l2 - l3^2 + eps*l4^2 with l1 equal to td.form.  The
// identity is verified exactly before returning (std::logic_error on an
// internal inconsistency); eps agrees with discriminant_eps(q) up to a
// square factor.  Throws std::invalid_argument if td is not a tangent datum
// of q.
NormalForm normal_form(const Rank4Quadric& q, const TangentDatum& td);

// The linear form cutting out the second sheet of the tangent-hyperplane
// section: on the quadric, l1*l2 = l3^2 - eps*l4^2 is a norm from the
// quadratic extension by sqrt(eps), so l1 and l2 take values of the same
// class at every completion of the base field.  Useful as a substitute
// numerator where l1 vanishes.
NfVec5 second_tangent_sheet(const NormalForm& nf);

}  // namespace dp4
