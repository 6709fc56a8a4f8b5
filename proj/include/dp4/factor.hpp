// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0
//
// Complete factorization of rational univariate polynomials.

#ifndef DP4_FACTOR_HPP_
#define DP4_FACTOR_HPP_

#include <utility>
#include <vector>

#include "dp4/polynomial.hpp"

namespace dp4 {

// p = unit * prod_i factors[i].first ^ factors[i].second with every factor
// monic irreducible over Q. The unit is the leading coefficient of p.
// Factors are sorted by (degree, then coefficient sequence) so the output
// is deterministic.
struct QFactorization {
  Rat unit;
  std::vector<std::pair<UniPoly, int>> factors;
};

// Exact factorization over Q; p must be nonzero.
QFactorization factor_over_q(const UniPoly& p);

bool is_irreducible_q(const UniPoly& p);

// Rational roots with multiplicities (read off the linear factors),
// sorted ascending.
std::vector<std::pair<Rat, int>> rational_roots(const UniPoly& p);

}  // namespace dp4

#endif  // DP4_FACTOR_HPP_
