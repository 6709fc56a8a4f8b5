// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0
//
// Zassenhaus-style factorization: squarefree split, reduction mod a good
// small prime, Berlekamp over F_p, Hensel lifting past the Mignotte bound,
// then factor recombination by exhaustive subsets (degrees here are tiny).

#include "dp4/factor.hpp"

#include <algorithm>
#include <stdexcept>

namespace dp4 {

namespace {

// ---------- integer polynomials (ascending coefficients) ----------

using ZPoly = std::vector<Int>;

void ztrim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int zdeg(const ZPoly& a) { return static_cast<int>(a.size()) - 1; }

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly c(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// Division by a monic divisor; true iff the remainder is zero.
bool zdivide_monic(const ZPoly& num, const ZPoly& den, ZPoly* quot) {
  ZPoly r = num;
  int dd = zdeg(den);
  if (zdeg(r) < dd) return false;
  ZPoly q(r.size() - dd, Int(0));
  for (int i = zdeg(r); i >= dd; --i) {
    Int f = r[i];
    if (f == 0) continue;
    q[i - dd] = f;
    for (int j = 0; j <= dd; ++j) r[i - dd + j] -= f * den[j];
  }
  ztrim(r);
  if (!r.empty()) return false;
  if (quot) *quot = std::move(q);
  return true;
}

// Reduce every coefficient into (-q/2, q/2].
void zreduce_symmetric(ZPoly& a, const Int& q) {
  Int half = q / 2;
  for (Int& c : a) {
    c %= q;
    if (c > half) c -= q;
    if (c < -half) c += q;
  }
  ztrim(a);
}

// ---------- polynomials over F_p, p a small odd prime ----------

using FpPoly = std::vector<long>;

FpPoly fp_trim(FpPoly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

int fp_deg(const FpPoly& a) { return static_cast<int>(a.size()) - 1; }

// Inverse of a mod p for a in [1, p).
long fp_inv(long a, long p) {
  long t = 0, nt = 1, r = p, nr = a;
  while (nr != 0) {
    long q = r / nr;
    long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  return ((t % p) + p) % p;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, long p) {
  if (a.empty() || b.empty()) return {};
  FpPoly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  }
  return fp_trim(std::move(c));
}

FpPoly fp_sub(FpPoly a, const FpPoly& b, long p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
  return fp_trim(std::move(a));
}

// In-place a -= f * x^shift * m (mod p); helper for division loops.
void fp_submul(FpPoly& a, long f, int shift, const FpPoly& m, long p) {
  for (size_t j = 0; j < m.size(); ++j)
    a[shift + j] = ((a[shift + j] - f * m[j]) % p + p) % p;
}

std::pair<FpPoly, FpPoly> fp_divrem(FpPoly a, const FpPoly& m, long p) {
  int dm = fp_deg(m);
  long inv_lc = fp_inv(m.back(), p);
  if (fp_deg(a) < dm) return {{}, fp_trim(std::move(a))};
  FpPoly q(a.size() - m.size() + 1, 0);
  while (fp_deg(a) >= dm) {
    long f = a.back() * inv_lc % p;
    int shift = fp_deg(a) - dm;
    q[shift] = f;
    fp_submul(a, f, shift, m, p);
    a = fp_trim(std::move(a));
  }
  return {fp_trim(std::move(q)), std::move(a)};
}

FpPoly fp_mod(FpPoly a, const FpPoly& m, long p) {
  return fp_divrem(std::move(a), m, p).second;
}

FpPoly fp_monic(FpPoly a, long p) {
  if (a.empty()) return a;
  long inv = fp_inv(a.back(), p);
  for (long& c : a) c = c * inv % p;
  return a;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, long p) {
  while (!b.empty()) {
    FpPoly r = fp_mod(std::move(a), b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return fp_monic(std::move(a), p);
}

// Monic g = gcd(a,b) with s*a + t*b = g (mod p).
void fp_ext_gcd(FpPoly a, FpPoly b, long p, FpPoly* g, FpPoly* s, FpPoly* t) {
  FpPoly s0{1}, s1, t0, t1{1};
  while (!b.empty()) {
    auto [q, r] = fp_divrem(std::move(a), b, p);
    a = std::move(b);
    b = std::move(r);
    FpPoly ns = fp_sub(std::move(s0), fp_mul(q, s1, p), p);
    s0 = s1;
    s1 = std::move(ns);
    FpPoly nt = fp_sub(std::move(t0), fp_mul(q, t1, p), p);
    t0 = t1;
    t1 = std::move(nt);
  }
  long inv = fp_inv(a.back(), p);
  for (long& c : a) c = c * inv % p;
  for (long& c : s0) c = c * inv % p;
  for (long& c : t0) c = c * inv % p;
  *g = std::move(a);
  *s = std::move(s0);
  *t = std::move(t0);
}

FpPoly fp_derivative(const FpPoly& a, long p) {
  if (a.size() <= 1) return {};
  FpPoly d(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i)
    d[i - 1] = static_cast<long>(i % p) * a[i] % p;
  return fp_trim(std::move(d));
}

// x^e mod m.
FpPoly fp_xpow_mod(long e, const FpPoly& m, long p) {
  FpPoly result{1};
  FpPoly base = fp_mod(FpPoly{0, 1}, m, p);
  while (e > 0) {
    if (e & 1) result = fp_mod(fp_mul(result, base, p), m, p);
    base = fp_mod(fp_mul(base, base, p), m, p);
    e >>= 1;
  }
  return result;
}

// Berlekamp factorization of a monic squarefree polynomial over F_p.
std::vector<FpPoly> berlekamp(const FpPoly& f, long p) {
  int n = fp_deg(f);
  if (n <= 1) return {f};
  // Frobenius v -> v^p on F_p[x]/(f): row j is x^{jp} mod f.
  std::vector<FpPoly> frob(n);
  FpPoly xp = fp_xpow_mod(p, f, p);
  frob[0] = FpPoly{1};
  for (int j = 1; j < n; ++j) frob[j] = fp_mod(fp_mul(frob[j - 1], xp, p), f, p);
  // v is in the Berlekamp subalgebra iff v (M - I) = 0 where row j of M is
  // frob[j]; eliminate on the transpose to get that left kernel.
  std::vector<std::vector<long>> m(n, std::vector<long>(n, 0));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n && i < static_cast<int>(frob[j].size()); ++i)
      m[i][j] = frob[j][i];
    m[j][j] = ((m[j][j] - 1) % p + p) % p;
  }
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int piv = -1;
    for (int r = rank; r < n; ++r)
      if (m[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[piv], m[rank]);
    long inv = fp_inv(m[rank][col], p);
    for (int c = 0; c < n; ++c) m[rank][c] = m[rank][c] * inv % p;
    for (int r = 0; r < n; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      long f2 = m[r][col];
      for (int c = 0; c < n; ++c)
        m[r][c] = ((m[r][c] - f2 * m[rank][c]) % p + p) % p;
    }
    pivot_col.push_back(col);
    ++rank;
  }
  int r_factors = n - rank;
  if (r_factors == 1) return {f};
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<FpPoly> basis;
  for (int col = 0; col < n; ++col) {
    if (is_pivot[col]) continue;
    FpPoly v(n, 0);
    v[col] = 1;
    for (int i = 0; i < rank; ++i)
      v[pivot_col[i]] = ((-m[i][col]) % p + p) % p;
    basis.push_back(fp_trim(std::move(v)));
  }
  // Split with gcd(g, v - c); every pair of irreducible factors is
  // separated by some basis vector, so this terminates with r factors.
  std::vector<FpPoly> factors{f};
  for (const FpPoly& v : basis) {
    if (static_cast<int>(factors.size()) == r_factors) break;
    if (fp_deg(v) < 1) continue;  // the constants vector splits nothing
    std::vector<FpPoly> next;
    for (FpPoly& g : factors) {
      if (fp_deg(g) == 1) {
        next.push_back(std::move(g));
        continue;
      }
      FpPoly rest = std::move(g);
      for (long c = 0; c < p && fp_deg(rest) > 0; ++c) {
        FpPoly vc = v;
        vc[0] = ((vc[0] - c) % p + p) % p;
        FpPoly d = fp_gcd(rest, fp_trim(std::move(vc)), p);
        if (fp_deg(d) > 0 && fp_deg(d) < fp_deg(rest)) {
          next.push_back(d);
          rest = fp_divrem(std::move(rest), d, p).first;
        }
      }
      if (fp_deg(rest) > 0) next.push_back(std::move(rest));
    }
    factors = std::move(next);
  }
  return factors;
}

// ---------- Hensel lifting ----------

// Lift the coprime split H ≡ u0*w0 (mod p), everything monic, to
// H ≡ U*W (mod modulus) where modulus is a power of p; returns U with
// symmetric coefficients. Linear lifting: one power of p per step.
ZPoly hensel_lift_factor(const ZPoly& H, const FpPoly& u0, const FpPoly& w0,
                         long p, const Int& modulus) {
  FpPoly g, a, b;
  fp_ext_gcd(u0, w0, p, &g, &a, &b);  // a*u0 + b*w0 = 1 (mod p)
  if (fp_deg(g) != 0)
    throw std::logic_error("hensel: factors not coprime mod p");

  auto to_z = [](const FpPoly& f) {
    ZPoly z(f.size());
    for (size_t i = 0; i < f.size(); ++i) z[i] = f[i];
    return z;
  };
  ZPoly u = to_z(u0), w = to_z(w0);
  Int pk(p);
  while (pk < modulus) {
    // e = (H - u*w) / p^k reduced mod p; corrections du = b*e mod u0,
    // dw = a*e mod w0 satisfy u*dw + w*du ≡ e (mod p) with the right
    // degree bounds, so u += p^k du, w += p^k dw lifts one power.
    ZPoly uw = zmul(u, w);
    ZPoly e(std::max(H.size(), uw.size()), Int(0));
    for (size_t i = 0; i < H.size(); ++i) e[i] += H[i];
    for (size_t i = 0; i < uw.size(); ++i) e[i] -= uw[i];
    ztrim(e);
    FpPoly ebar(e.size());
    for (size_t i = 0; i < e.size(); ++i) {
      Int red = (e[i] / pk) % p;  // e is divisible by p^k by construction
      long v = red.get_si();
      ebar[i] = ((v % p) + p) % p;
    }
    ebar = fp_trim(std::move(ebar));
    FpPoly du = fp_mod(fp_mul(ebar, b, p), u0, p);
    FpPoly dw = fp_mod(fp_mul(ebar, a, p), w0, p);
    for (size_t i = 0; i < du.size(); ++i) {
      if (i >= u.size()) u.resize(i + 1, Int(0));
      u[i] += pk * du[i];
    }
    for (size_t i = 0; i < dw.size(); ++i) {
      if (i >= w.size()) w.resize(i + 1, Int(0));
      w[i] += pk * dw[i];
    }
    pk *= p;
    zreduce_symmetric(u, pk);
    zreduce_symmetric(w, pk);
  }
  return u;
}

// ---------- Zassenhaus on a monic squarefree integer polynomial ----------

// Bounds the coefficients of any monic divisor: 2^n * sqrt(n+1) * |H|_inf.
Int mignotte_bound(const ZPoly& H) {
  Int mx(0);
  for (const Int& c : H) {
    Int a = c < 0 ? -c : c;
    if (a > mx) mx = a;
  }
  int n = zdeg(H);
  Int bound = mx * (isqrt(Int(n + 1)) + 1);
  bound <<= n;
  return bound;
}

std::vector<ZPoly> zassenhaus_monic(const ZPoly& H) {
  int n = zdeg(H);
  if (n <= 1) return {H};

  // Good odd prime: H mod p stays squarefree (H monic, so the degree
  // never drops). Bad primes divide disc(H), so a small one exists.
  long p = 0;
  FpPoly hbar;
  for (Int cand(3); cand < 10000; cand = next_prime_after(cand)) {
    long pc = cand.get_si();
    FpPoly f(H.size());
    for (size_t i = 0; i < H.size(); ++i)
      f[i] = static_cast<long>(mpz_fdiv_ui(H[i].get_mpz_t(), pc));
    f = fp_trim(std::move(f));
    FpPoly d = fp_derivative(f, pc);
    if (d.empty()) continue;
    if (fp_deg(fp_gcd(f, d, pc)) == 0) {
      p = pc;
      hbar = std::move(f);
      break;
    }
  }
  if (p == 0) throw std::runtime_error("no squarefree reduction prime below 10000");

  std::vector<FpPoly> modular = berlekamp(fp_monic(hbar, p), p);
  if (modular.size() == 1) return {H};

  // Lift each modular factor to precision past twice the Mignotte bound;
  // modulus is the exact power of p the lift stops at.
  Int bound2 = mignotte_bound(H) * 2 + 1;
  Int modulus(p);
  while (modulus < bound2) modulus *= p;

  std::vector<ZPoly> lifted;
  lifted.reserve(modular.size());
  for (const FpPoly& u : modular) {
    FpPoly w = fp_divrem(hbar, u, p).first;
    lifted.push_back(
        hensel_lift_factor(H, fp_monic(u, p), fp_monic(w, p), p, modulus));
  }

  // Recombine: subset products in increasing subset size. True factors have
  // coefficients under half the modulus, so the symmetric residue of a
  // correct subset product is the factor itself and plain division detects it.
  std::vector<int> live(modular.size());
  for (size_t i = 0; i < live.size(); ++i) live[i] = static_cast<int>(i);
  ZPoly remaining = H;
  std::vector<ZPoly> out;

  size_t s = 1;
  while (2 * s <= live.size()) {
    bool found = false;
    std::vector<size_t> comb(s);
    for (size_t i = 0; i < s; ++i) comb[i] = i;
    while (true) {
      ZPoly cand{Int(1)};
      for (size_t i : comb) {
        cand = zmul(cand, lifted[live[i]]);
        zreduce_symmetric(cand, modulus);
      }
      ZPoly quot;
      if (zdivide_monic(remaining, cand, &quot)) {
        out.push_back(std::move(cand));
        remaining = std::move(quot);
        std::vector<int> next_live;
        for (size_t i = 0, j = 0; i < live.size(); ++i) {
          if (j < s && comb[j] == i) {
            ++j;
            continue;
          }
          next_live.push_back(live[i]);
        }
        live = std::move(next_live);
        found = true;
        break;
      }
      int k = static_cast<int>(s) - 1;
      while (k >= 0 && comb[k] == live.size() - s + static_cast<size_t>(k)) --k;
      if (k < 0) break;
      ++comb[k];
      for (size_t i = k + 1; i < s; ++i) comb[i] = comb[i - 1] + 1;
    }
    if (!found) ++s;
  }
  if (zdeg(remaining) > 0) out.push_back(remaining);
  return out;
}

// Monic squarefree rational polynomial -> monic irreducible rational factors.
std::vector<UniPoly> factor_squarefree_monic(const UniPoly& g) {
  int n = g.degree();
  if (n <= 1) return {g};
  // H(x) = d^n g(x/d) is monic integral when d is the lcm of the
  // coefficient denominators.
  Int d(1);
  for (const Rat& a : g.coeffs())
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), a.get_den().get_mpz_t());
  ZPoly H(n + 1);
  Int dpow(1);
  for (int i = n; i >= 0; --i) {
    Rat c = g.coeff(i) * Rat(dpow);
    if (c.get_den() != 1) throw std::logic_error("denominator clearing failed");
    H[i] = c.get_num();
    dpow *= d;
  }
  std::vector<UniPoly> out;
  for (const ZPoly& h : zassenhaus_monic(H)) {
    // map back: f(x) = h(d x) / d^deg(h)
    std::vector<Rat> c(h.size());
    Rat scale(1);
    for (size_t i = 0; i < h.size(); ++i) {
      c[i] = Rat(h[i]) * scale;
      scale *= Rat(d);
    }
    out.push_back(UniPoly(std::move(c)).monic());
  }
  return out;
}

bool poly_less(const UniPoly& a, const UniPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = 0; i <= a.degree(); ++i)
    if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
  return false;
}

}  // namespace

QFactorization factor_over_q(const UniPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("factor of zero polynomial");
  QFactorization out;
  out.unit = p.leading();
  if (p.degree() == 0) return out;
  for (const auto& [g, mult] : squarefree_decomposition(p)) {
    for (UniPoly& f : factor_squarefree_monic(g))
      out.factors.emplace_back(std::move(f), mult);
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  return out;
}

bool is_irreducible_q(const UniPoly& p) {
  if (p.degree() < 1) return false;
  auto f = factor_over_q(p);
  return f.factors.size() == 1 && f.factors[0].second == 1;
}

std::vector<std::pair<Rat, int>> rational_roots(const UniPoly& p) {
  std::vector<std::pair<Rat, int>> out;
  for (const auto& [f, mult] : factor_over_q(p).factors)
    if (f.degree() == 1) out.emplace_back(-f.coeff(0), mult);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dp4
