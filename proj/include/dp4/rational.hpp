// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exact rational arithmetic: GMP-backed integers/rationals, square classes,
// and the integer factorization helpers behind squarefree-part extraction.

#ifndef DP4_RATIONAL_HPP
#define DP4_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dp4 {

using Int = mpz_class;
using Rat = mpq_class;  // canonical: gcd(num, den) = 1, den > 0

inline const Int& num(const Rat& r) { return r.get_num(); }
inline const Int& den(const Rat& r) { return r.get_den(); }
inline bool is_integer(const Rat& r) { return r.get_den() == 1; }
inline int sign(const Rat& r) { return sgn(r); }
inline int sign(const Int& n) { return sgn(n); }

// Parses "p/q" or "p" (arbitrary precision, optional leading '-').
Rat rat_from_string(const std::string& s);
std::string rat_to_string(const Rat& r);

Int int_pow(Int base, unsigned long e);
Rat rat_pow(const Rat& base, long e);

// floor(sqrt(n)) for n >= 0
Int isqrt(const Int& n);
bool is_perfect_square(const Int& n);
// true iff r is the square of a rational
bool is_rational_square(const Rat& r);

// Complete factorization of |n| (n != 0): trial division by small primes,
// then Pollard-Brent rho with a probable-prime test (exact at desk scale).
std::map<Int, unsigned> factor_integer(Int n);

// Signed squarefree part: the squarefree s with n/s a positive square.
Int squarefree_part(const Int& n);

// An element of Q^x / Q^x2, stored as its unique squarefree integer.
struct SquareClassQ {
  Int value;  // squarefree, nonzero

  bool operator==(const SquareClassQ& o) const { return value == o.value; }
  bool operator!=(const SquareClassQ& o) const { return value != o.value; }
  bool is_trivial() const { return value == 1; }
};

// Squarefree integer s with r/s a rational square. r != 0.
SquareClassQ rational_square_class(const Rat& r);

// p-adic valuation of a nonzero rational (p prime).
long padic_valuation(const Rat& r, const Int& p);
long padic_valuation(const Int& n, const Int& p);

// deterministic Miller-Rabin wrapper (GMP probable-prime, reps 40)
bool is_probable_prime(const Int& n);
// next prime > n
Int next_prime_after(const Int& n);

}  // namespace dp4

#endif  // DP4_RATIONAL_HPP
