// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dp4/rational.hpp"

#include <algorithm>

namespace dp4 {

Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rat r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("malformed rational literal: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string rat_to_string(const Rat& r) {
  return r.get_str();
}

Int int_pow(Int base, unsigned long e) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

Rat rat_pow(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  if (base == 0 && e < 0) throw std::invalid_argument("0^negative");
  Rat b = e > 0 ? base : Rat(1) / base;
  unsigned long k = static_cast<unsigned long>(e > 0 ? e : -e);
  Rat out(int_pow(b.get_num(), k), int_pow(b.get_den(), k));
  out.canonicalize();
  return out;
}

Int isqrt(const Int& n) {
  if (n < 0) throw std::invalid_argument("isqrt of negative");
  Int out;
  mpz_sqrt(out.get_mpz_t(), n.get_mpz_t());
  return out;
}

bool is_perfect_square(const Int& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

bool is_rational_square(const Rat& r) {
  return r > 0 && is_perfect_square(r.get_num()) && is_perfect_square(r.get_den());
}

bool is_probable_prime(const Int& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

Int next_prime_after(const Int& n) {
  Int out;
  mpz_nextprime(out.get_mpz_t(), n.get_mpz_t());
  return out;
}

namespace {

Int pollard_brent(const Int& n) {
  // Brent's cycle variant; n odd composite, not a prime power handled by caller.
  if (n % 2 == 0) return 2;
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(0xdb4ul);
  while (true) {
    Int y = rng.get_z_range(n - 3) + 2;
    Int c = rng.get_z_range(n - 2) + 1;
    Int m = 128, g = 1, r = 1, q = 1, x, ys;
    while (g == 1) {
      x = y;
      for (Int i = 0; i < r; ++i) y = (y * y + c) % n;
      Int k = 0;
      while (k < r && g == 1) {
        ys = y;
        Int lim = std::min(m, Int(r - k));
        for (Int i = 0; i < lim; ++i) {
          y = (y * y + c) % n;
          q = q * (x > y ? x - y : y - x) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = (ys * ys + c) % n;
        Int d = x > ys ? x - ys : ys - x;
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      }
    }
    if (g != n) return g;
  }
}

void factor_rec(Int n, std::map<Int, unsigned>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out[n]++;
    return;
  }
  // perfect powers collapse to their root
  if (is_perfect_square(n)) {
    Int r = isqrt(n);
    std::map<Int, unsigned> sub;
    factor_rec(r, sub);
    for (auto& [p, e] : sub) out[p] += 2 * e;
    return;
  }
  Int d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

std::map<Int, unsigned> factor_integer(Int n) {
  if (n == 0) throw std::invalid_argument("factor_integer(0)");
  std::map<Int, unsigned> out;
  if (n < 0) n = -n;
  for (Int p : {2, 3, 5, 7, 11, 13}) {
    while (n % p == 0) {
      out[p]++;
      n /= p;
    }
  }
  // bounded trial division
  for (Int p = 17; p * p <= n && p < 100000; p += 2) {
    while (n % p == 0) {
      out[p]++;
      n /= p;
    }
  }
  if (n > 1) factor_rec(n, out);
  return out;
}

Int squarefree_part(const Int& n) {
  if (n == 0) return 0;
  Int s = n < 0 ? -1 : 1;
  for (const auto& [p, e] : factor_integer(n))
    if (e % 2) s *= p;
  return s;
}

SquareClassQ rational_square_class(const Rat& r) {
  if (r == 0) throw std::invalid_argument("square class of 0");
  // p/q ~ p*q modulo squares
  return SquareClassQ{squarefree_part(r.get_num() * r.get_den())};
}

long padic_valuation(const Int& n, const Int& p) {
  if (n == 0) throw std::invalid_argument("valuation of 0");
  long v = 0;
  Int m = n;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

long padic_valuation(const Rat& r, const Int& p) {
  if (r == 0) throw std::invalid_argument("valuation of 0");
  return padic_valuation(r.get_num(), p) - padic_valuation(r.get_den(), p);
}

}  // namespace dp4
