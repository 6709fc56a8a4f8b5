// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dp4/localarith.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dp4/factor.hpp"
#include "dp4/linalg.hpp"

namespace dp4 {
namespace {

// ---------------------------------------------------------------------------
// Modular helpers.
// ---------------------------------------------------------------------------

Int gcd_int(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Int lcm_int(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

Int mod_pos(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

// a mod m for rational a whose denominator is invertible mod m.
Int rat_mod(const Rat& a, const Int& m) {
  Int den = a.get_den();
  Int inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::logic_error("rat_mod: denominator not invertible mod m");
  return mod_pos(Int(a.get_num()) * inv, m);
}

struct PadicParts {
  long val = 0;
  Rat unit;  // p-adic unit with a = p^val * unit
};

PadicParts padic_split(const Rat& a, const Int& p) {
  PadicParts out;
  out.val = padic_valuation(a, p);
  unsigned long e =
      static_cast<unsigned long>(out.val < 0 ? -out.val : out.val);
  Rat pk(int_pow(p, e));
  out.unit = out.val >= 0 ? Rat(a / pk) : Rat(a * pk);
  return out;
}

int legendre_unit(const Rat& u, const Int& p) {
  Int r = rat_mod(u, p);
  return mpz_legendre(r.get_mpz_t(), p.get_mpz_t());
}

long lmod(long a, long p) {
  long r = a % p;
  return r < 0 ? r + p : r;
}

long linv(long a, long p) {
  long t = 0, nt = 1, r = p, nr = lmod(a, p);
  while (nr != 0) {
    long q = r / nr;
    long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  return lmod(t, p);
}

// ---------------------------------------------------------------------------
// Sturm sequences and real root isolation.
// ---------------------------------------------------------------------------

std::vector<UniPoly> sturm_chain(const UniPoly& f) {
  std::vector<UniPoly> ch{f};
  UniPoly cur = f.derivative();
  while (!cur.is_zero()) {
    ch.push_back(cur);
    UniPoly r = divrem(ch[ch.size() - 2], cur).second;
    cur = -r;
  }
  return ch;
}

int sign_variations(const std::vector<UniPoly>& ch, const Rat& x) {
  int var = 0, last = 0;
  for (const UniPoly& f : ch) {
    Rat v = f.eval(x);
    int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++var;
    last = s;
  }
  return var;
}

// Number of distinct real roots of the (squarefree) chain head in (a, b].
int sturm_count(const std::vector<UniPoly>& ch, const Rat& a, const Rat& b) {
  return sign_variations(ch, a) - sign_variations(ch, b);
}

// All real roots of f lie strictly inside (-bound, bound).
Rat cauchy_bound(const UniPoly& f) {
  Rat m(0);
  Rat lead = abs(f.leading());
  for (int i = 0; i < f.degree(); ++i) {
    Rat a = abs(f.coeff(i)) / lead;
    if (a > m) m = a;
  }
  return m + 1;
}

UniPoly squarefree_part(const UniPoly& f) {
  if (f.degree() <= 0) return f;
  UniPoly g = poly_gcd(f, f.derivative());
  if (g.degree() < 1) return f;
  return divrem(f, g).first;
}

struct IsolatedRoot {
  bool exact = false;
  Rat root;     // when exact
  Rat lo, hi;   // otherwise: f(lo) * f(hi) < 0, single simple root inside
};

// f squarefree with f(lo) != 0, f(hi) != 0 and n roots inside (lo, hi).
void isolate_rec(const UniPoly& f, const std::vector<UniPoly>& ch,
                 const Rat& lo, const Rat& hi, int n,
                 std::vector<IsolatedRoot>* out) {
  if (n <= 0) return;
  if (n == 1) {
    IsolatedRoot r;
    r.lo = lo;
    r.hi = hi;
    out->push_back(r);
    return;
  }
  Rat mid = (lo + hi) / 2;
  if (f.eval(mid) == 0) {
    IsolatedRoot r;
    r.exact = true;
    r.root = mid;
    out->push_back(r);
    Rat w = (hi - lo) / 4;
    while (sturm_count(ch, mid - w, mid + w) != 1) w = w / 2;
    isolate_rec(f, ch, lo, mid - w, sturm_count(ch, lo, mid - w), out);
    isolate_rec(f, ch, mid + w, hi, sturm_count(ch, mid + w, hi), out);
    return;
  }
  int left = sturm_count(ch, lo, mid);
  isolate_rec(f, ch, lo, mid, left, out);
  isolate_rec(f, ch, mid, hi, n - left, out);
}

// Isolating intervals (or exact roots) for a squarefree polynomial.
std::vector<IsolatedRoot> isolate_real_roots(const UniPoly& f) {
  std::vector<IsolatedRoot> out;
  if (f.degree() < 1) return out;
  std::vector<UniPoly> ch = sturm_chain(f);
  Rat b = cauchy_bound(f);
  isolate_rec(f, ch, -b, b, sturm_count(ch, -b, b), &out);
  std::sort(out.begin(), out.end(),
            [](const IsolatedRoot& a, const IsolatedRoot& c) {
              Rat am = a.exact ? a.root : Rat((a.lo + a.hi) / 2);
              Rat cm = c.exact ? c.root : Rat((c.lo + c.hi) / 2);
              return am < cm;
            });
  return out;
}

// Shrink an isolating interval to width <= eps by bisection (keeping the
// sign change); may discover the root exactly.
IsolatedRoot refine_root(const UniPoly& f, IsolatedRoot r, const Rat& eps) {
  if (r.exact) return r;
  Rat flo = f.eval(r.lo);
  while (r.hi - r.lo > eps) {
    Rat mid = (r.lo + r.hi) / 2;
    Rat fm = f.eval(mid);
    if (fm == 0) {
      r.exact = true;
      r.root = mid;
      return r;
    }
    if ((flo > 0) != (fm > 0)) {
      r.hi = mid;
    } else {
      r.lo = mid;
      flo = fm;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Integral models of quadratic forms.
// ---------------------------------------------------------------------------

// Primitive integral model of the quadratic form x^T g x / 2: a symmetric
// integer matrix h with even diagonal, h = c * (scaled g), content 1.
struct IntGram {
  int n = 0;
  std::vector<std::vector<Int>> h;
};

IntGram make_integral(const MatX& g) {
  const int n = static_cast<int>(g.rows());
  // Coefficients of the polynomial: diagonal g_ii/2, off-diagonal g_ij.
  Int den(1);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Rat c = i == j ? Rat(g(i, i) / 2) : Rat(g(i, j));
      den = lcm_int(den, Int(c.get_den()));
    }
  Int num(0);
  std::vector<std::vector<Int>> co(n, std::vector<Int>(n, Int(0)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Rat c = i == j ? Rat(g(i, i) / 2) : Rat(g(i, j));
      Rat scaled = c * Rat(den);
      co[i][j] = scaled.get_num();
      num = gcd_int(num, co[i][j]);
    }
  if (num == 0) num = 1;
  IntGram out;
  out.n = n;
  out.h.assign(n, std::vector<Int>(n, Int(0)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Int c = co[i][j] / num;
      if (i == j) {
        out.h[i][i] = 2 * c;
      } else {
        out.h[i][j] = c;
        out.h[j][i] = c;
      }
    }
  return out;
}

// Value of the integral quadratic form at an integer vector.
Int q_val(const IntGram& q, const std::vector<Int>& x) {
  Int s(0);
  for (int i = 0; i < q.n; ++i) {
    s += (q.h[i][i] / 2) * x[i] * x[i];
    for (int j = i + 1; j < q.n; ++j) s += q.h[i][j] * x[i] * x[j];
  }
  return s;
}

// Gradient h * x (twice the differential of the form).
std::vector<Int> q_grad(const IntGram& q, const std::vector<Int>& x) {
  std::vector<Int> g(q.n, Int(0));
  for (int i = 0; i < q.n; ++i)
    for (int j = 0; j < q.n; ++j) g[i] += q.h[i][j] * x[j];
  return g;
}

// Exact rational value of the form at a rational vector.
Rat q_val_rat(const IntGram& q, const std::vector<Rat>& x) {
  Rat s(0);
  for (int i = 0; i < q.n; ++i) {
    s += Rat(q.h[i][i] / 2) * x[i] * x[i];
    for (int j = i + 1; j < q.n; ++j) s += Rat(q.h[i][j]) * x[i] * x[j];
  }
  return s;
}

// x^T g x over the rationals (Gram convention: twice the quadric value).
Rat gram_val(const Mat5& g, const Vec5& x) {
  Rat s(0);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) s += x(i) * g(i, j) * x(j);
  return s;
}

Rat bilinear(const Mat5& g, const Vec5& a, const Vec5& b) {
  Rat s(0);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) s += a(i) * g(i, j) * b(j);
  return s;
}

// Positive or negative definiteness via leading principal minors.
bool is_definite_sym(const MatX& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<Rat> minors(n);
  for (int k = 1; k <= n; ++k) {
    MatX sub = m.topLeftCorner(k, k);
    minors[k - 1] = exact_det(sub);
  }
  bool pos = true, neg = true;
  for (int k = 1; k <= n; ++k) {
    if (minors[k - 1] <= 0) pos = false;
    Rat want = (k % 2 == 1) ? Rat(-minors[k - 1]) : minors[k - 1];
    if (want <= 0) neg = false;
  }
  return pos || neg;
}

// Primitive integer representative of a nonzero rational vector.
std::array<Int, 5> primitive_int_vec5(const Vec5& v) {
  Int den(1);
  for (int i = 0; i < 5; ++i) den = lcm_int(den, Int(v(i).get_den()));
  std::array<Int, 5> o{};
  Int g(0);
  for (int i = 0; i < 5; ++i) {
    o[i] = Int(v(i).get_num()) * (den / Int(v(i).get_den()));
    g = gcd_int(g, o[i]);
  }
  if (g == 0) throw std::invalid_argument("zero vector");
  for (auto& c : o) c /= g;
  return o;
}

// Columns of a unimodular complement: four integer vectors spanning the
// saturated kernel lattice of a primitive integer covector.
std::array<std::array<Int, 5>, 4> integer_kernel_basis(std::array<Int, 5> a) {
  std::array<std::array<Int, 5>, 5> cols{};
  for (int j = 0; j < 5; ++j)
    for (int r = 0; r < 5; ++r) cols[j][r] = (j == r) ? 1 : 0;
  while (true) {
    int cnt = 0;
    for (int j = 0; j < 5; ++j)
      if (a[j] != 0) ++cnt;
    if (cnt <= 1) break;
    int i = -1;
    for (int j = 0; j < 5; ++j) {
      if (a[j] == 0) continue;
      if (i < 0 || mpz_cmpabs(a[j].get_mpz_t(), a[i].get_mpz_t()) < 0) i = j;
    }
    for (int j = 0; j < 5; ++j) {
      if (j == i || a[j] == 0) continue;
      Int q = a[j] / a[i];
      if (q == 0) continue;
      a[j] -= q * a[i];
      for (int r = 0; r < 5; ++r) cols[j][r] -= q * cols[i][r];
    }
  }
  int piv = -1;
  for (int j = 0; j < 5; ++j)
    if (a[j] != 0) piv = j;
  if (piv < 0 || abs_int(a[piv]) != 1)
    throw std::logic_error("integer_kernel_basis: input not primitive");
  std::array<std::array<Int, 5>, 4> out{};
  int k = 0;
  for (int j = 0; j < 5; ++j)
    if (j != piv) out[k++] = cols[j];
  return out;
}

// B^T g B for a 5x5 Gram matrix and four integer columns.
MatX restrict_gram(const Mat5& g,
                   const std::array<std::array<Int, 5>, 4>& basis) {
  MatX out(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      Rat s(0);
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
          s += Rat(basis[r][i]) * g(i, j) * Rat(basis[c][j]);
      out(r, c) = s;
    }
  return out;
}

// ---------------------------------------------------------------------------
// p-adic residue tree: branch lifting with strong Hensel certificates.
// ---------------------------------------------------------------------------

struct PadicState {
  std::vector<Int> x;  // canonical in [0, p^level); first p-unit coord is 1
  long level = 1;
};

// Minimal p-adic valuation over the 2x2 minors of the Jacobian at x,
// capped at `cap` (all minors zero count as the cap).
long minor_valuation(const IntGram& q1, const IntGram& q2,
                     const std::vector<Int>& x, const Int& p, long cap) {
  std::vector<Int> g1 = q_grad(q1, x), g2 = q_grad(q2, x);
  long best = cap;
  for (int i = 0; i < q1.n && best > 0; ++i)
    for (int j = i + 1; j < q1.n; ++j) {
      Int m = g1[i] * g2[j] - g1[j] * g2[i];
      if (m == 0) continue;
      long v = padic_valuation(m, p);
      if (v < best) best = v;
      if (best == 0) break;
    }
  return best;
}

struct ModSolution {
  bool consistent = false;
  std::vector<long> part;
  std::vector<std::vector<long>> kernel;
};

// Solve rows * z = rhs over F_p (entries reduced mod p, p fits in long).
ModSolution solve_modp(std::vector<std::vector<long>> rows,
                       std::vector<long> rhs, long p) {
  const int m = static_cast<int>(rows.size());
  const int n = m == 0 ? 0 : static_cast<int>(rows[0].size());
  std::vector<int> pivcol;
  int rank = 0;
  for (int col = 0; col < n && rank < m; ++col) {
    int piv = -1;
    for (int r = rank; r < m; ++r)
      if (rows[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    std::swap(rhs[piv], rhs[rank]);
    long inv = linv(rows[rank][col], p);
    for (int c = col; c < n; ++c) rows[rank][c] = rows[rank][c] * inv % p;
    rhs[rank] = rhs[rank] * inv % p;
    for (int r = 0; r < m; ++r) {
      if (r == rank) continue;
      long f = rows[r][col];
      if (f == 0) continue;
      for (int c = col; c < n; ++c)
        rows[r][c] = lmod(rows[r][c] - f * rows[rank][c], p);
      rhs[r] = lmod(rhs[r] - f * rhs[rank], p);
    }
    pivcol.push_back(col);
    ++rank;
  }
  for (int r = rank; r < m; ++r)
    if (rhs[r] != 0) return {};
  ModSolution s;
  s.consistent = true;
  s.part.assign(n, 0);
  for (int i = 0; i < rank; ++i) s.part[pivcol[i]] = rhs[i];
  std::vector<bool> ispiv(n, false);
  for (int c : pivcol) ispiv[c] = true;
  for (int col = 0; col < n; ++col) {
    if (ispiv[col]) continue;
    std::vector<long> k(n, 0);
    k[col] = 1;
    for (int i = 0; i < rank; ++i)
      if (pivcol[i] < col) k[pivcol[i]] = lmod(-rows[i][col], p);
    s.kernel.push_back(std::move(k));
  }
  return s;
}

int first_unit_coord(const std::vector<Int>& x, const Int& p) {
  for (int i = 0; i < static_cast<int>(x.size()); ++i)
    if (mod_pos(x[i], p) != 0) return i;
  return -1;
}

// Children of a level-k state: solutions z mod p of J z = -F/p^k with the
// gauge z_{i0} = 0 fixing the projective scale. Appends to *out; returns
// false when the cap was hit (enumeration truncated).
bool expand_state(const IntGram& q1, const IntGram& q2, const Int& p,
                  const PadicState& st, std::vector<PadicState>* out,
                  size_t cap) {
  const int n = q1.n;
  const long pl = p.get_si();
  Int pk = int_pow(p, static_cast<unsigned long>(st.level));
  Int f1 = q_val(q1, st.x), f2 = q_val(q2, st.x);
  std::vector<Int> g1 = q_grad(q1, st.x), g2 = q_grad(q2, st.x);
  int gauge = first_unit_coord(st.x, p);
  std::vector<std::vector<long>> rows(3, std::vector<long>(n, 0));
  std::vector<long> rhs(3, 0);
  for (int i = 0; i < n; ++i) {
    rows[0][i] = mod_pos(g1[i], p).get_si();
    rows[1][i] = mod_pos(g2[i], p).get_si();
    rows[2][i] = (i == gauge) ? 1 : 0;
  }
  rhs[0] = mod_pos(-(f1 / pk), p).get_si();
  rhs[1] = mod_pos(-(f2 / pk), p).get_si();
  ModSolution sol = solve_modp(rows, rhs, pl);
  if (!sol.consistent) return true;
  const int dim = static_cast<int>(sol.kernel.size());
  std::vector<long> lam(dim, 0);
  while (true) {
    if (out->size() >= cap) return false;
    std::vector<long> z = sol.part;
    for (int d = 0; d < dim; ++d) {
      if (lam[d] == 0) continue;
      for (int i = 0; i < n; ++i)
        z[i] = lmod(z[i] + lam[d] * sol.kernel[d][i], pl);
    }
    PadicState ch;
    ch.level = st.level + 1;
    ch.x = st.x;
    for (int i = 0; i < n; ++i) ch.x[i] += pk * z[i];
    out->push_back(std::move(ch));
    int d = 0;
    while (d < dim && ++lam[d] == pl) {
      lam[d] = 0;
      ++d;
    }
    if (d == dim) break;
  }
  return true;
}

struct TreeOut {
  std::vector<std::pair<PadicState, long>> certified;  // state, minor valuation
  bool truncated = false;  // some enumeration was cut short
  bool died = false;       // every branch terminated (complete search)
};

constexpr double kResidueEnumLimit = 3.0e6;
constexpr size_t kRandomResidueDraws = 200000;

// Breadth-first search of projective residue solutions: level-1 states come
// from complete enumeration mod p (or random sampling when p^(n-1) is too
// large, which marks the result truncated), deeper levels from expand_state.
// A state at level k with minor valuation e is certified once k >= 2e + 1.
TreeOut padic_tree(const IntGram& q1, const IntGram& q2, const Int& p,
                   long max_level, size_t cap, size_t want) {
  TreeOut out;
  const int n = q1.n;
  double proj = 1;
  for (int i = 0; i + 1 < n; ++i) proj *= p.get_d();
  std::vector<PadicState> cur;
  if (!p.fits_slong_p() || proj > kResidueEnumLimit) {
    // Random search for smooth residue points only; never complete.
    out.truncated = true;
    std::mt19937_64 rng(0x51ab5eedULL ^ p.get_ui());
    std::set<std::vector<Int>> seen;
    for (size_t it = 0; it < kRandomResidueDraws && out.certified.size() < want;
         ++it) {
      std::vector<Int> x(n);
      for (auto& c : x) c = mod_pos(Int(static_cast<unsigned long>(rng())) +
                                        Int(static_cast<unsigned long>(rng())) *
                                            Int("4294967296"),
                                    p);
      int i0 = first_unit_coord(x, p);
      if (i0 < 0) continue;
      Int inv;
      mpz_invert(inv.get_mpz_t(), x[i0].get_mpz_t(), p.get_mpz_t());
      for (auto& c : x) c = mod_pos(c * inv, p);
      if (mod_pos(q_val(q1, x), p) != 0 || mod_pos(q_val(q2, x), p) != 0)
        continue;
      if (minor_valuation(q1, q2, x, p, 1) != 0) continue;
      if (!seen.insert(x).second) continue;
      PadicState st;
      st.x = std::move(x);
      st.level = 1;
      out.certified.push_back({std::move(st), 0});
    }
    return out;
  }
  // Complete level-1 enumeration: first unit coordinate scaled to one.
  const long pl = p.get_si();
  for (int lead = 0; lead < n; ++lead) {
    std::vector<Int> x(n, Int(0));
    x[lead] = 1;
    const int freev = n - lead - 1;
    std::vector<long> idx(freev, 0);
    while (true) {
      for (int i = 0; i < freev; ++i) x[lead + 1 + i] = idx[i];
      if (mod_pos(q_val(q1, x), p) == 0 && mod_pos(q_val(q2, x), p) == 0) {
        PadicState st;
        st.x = x;
        st.level = 1;
        cur.push_back(std::move(st));
      }
      int d = 0;
      while (d < freev && ++idx[d] == pl) {
        idx[d] = 0;
        ++d;
      }
      if (d == freev) break;
    }
  }
  for (long lev = 1; lev <= max_level; ++lev) {
    std::vector<PadicState> next;
    bool any_open = false;
    for (const PadicState& st : cur) {
      long e = minor_valuation(q1, q2, st.x, p, st.level);
      if (st.level >= 2 * e + 1) {
        out.certified.push_back({st, e});
        if (out.certified.size() >= want) return out;
        continue;
      }
      if (lev == max_level) {
        any_open = true;
        continue;
      }
      if (!expand_state(q1, q2, p, st, &next, cap)) out.truncated = true;
    }
    if (lev == max_level) {
      if (any_open) out.truncated = true;
      break;
    }
    if (next.empty()) {
      if (!out.truncated) out.died = true;
      break;
    }
    cur = std::move(next);
  }
  return out;
}

// Newton iteration over Q on the two active coordinates of the least
// degenerate Jacobian minor; returns coordinates mod p^target with both
// forms verified to vanish at that precision.
std::optional<std::vector<Int>> newton_lift(const IntGram& q1,
                                            const IntGram& q2, const Int& p,
                                            const PadicState& st,
                                            long target) {
  const int n = q1.n;
  std::vector<Int> G1 = q_grad(q1, st.x), G2 = q_grad(q2, st.x);
  int bi = -1, bj = -1;
  long be = -1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Int m = G1[i] * G2[j] - G1[j] * G2[i];
      if (m == 0) continue;
      long v = padic_valuation(m, p);
      if (be < 0 || v < be) {
        be = v;
        bi = i;
        bj = j;
      }
    }
  if (bi < 0) return std::nullopt;
  std::vector<Rat> x(n);
  for (int i = 0; i < n; ++i) x[i] = Rat(st.x[i]);
  long lastv = -1;
  for (int iter = 0; iter < 200; ++iter) {
    Rat f1 = q_val_rat(q1, x), f2 = q_val_rat(q2, x);
    long v1 = f1 == 0 ? target : padic_valuation(f1, p);
    long v2 = f2 == 0 ? target : padic_valuation(f2, p);
    long v = std::min(v1, v2);
    if (v >= target) break;
    if (v <= lastv) return std::nullopt;  // stalled
    lastv = v;
    Rat g1i(0), g1j(0), g2i(0), g2j(0);
    for (int c = 0; c < n; ++c) {
      g1i += Rat(q1.h[bi][c]) * x[c];
      g1j += Rat(q1.h[bj][c]) * x[c];
      g2i += Rat(q2.h[bi][c]) * x[c];
      g2j += Rat(q2.h[bj][c]) * x[c];
    }
    Rat det = g1i * g2j - g1j * g2i;
    if (det == 0) return std::nullopt;
    x[bi] -= (g2j * f1 - g1j * f2) / det;
    x[bj] -= (g1i * f2 - g2i * f1) / det;
  }
  Int pN = int_pow(p, static_cast<unsigned long>(target));
  std::vector<Int> out(n);
  try {
    for (int i = 0; i < n; ++i) out[i] = rat_mod(x[i], pN);
  } catch (const std::logic_error&) {
    return std::nullopt;
  }
  if (mod_pos(q_val(q1, out), pN) != 0 || mod_pos(q_val(q2, out), pN) != 0)
    return std::nullopt;
  return out;
}

// ---------------------------------------------------------------------------
// Real sampling helpers.
// ---------------------------------------------------------------------------

Vec5 first_nonzero_normalize(const Vec5& v) {
  Vec5 out = v;
  for (int i = 0; i < 5; ++i)
    if (out(i) != 0) {
      Rat s = out(i);
      for (int j = 0; j < 5; ++j) out(j) = out(j) / s;
      return out;
    }
  return out;
}

Vec5 maxabs_normalize(const Vec5& v) {
  int best = 0;
  Rat m(0);
  for (int i = 0; i < 5; ++i) {
    Rat a = abs(v(i));
    if (a > m) {
      m = a;
      best = i;
    }
  }
  Vec5 out = v;
  if (m == 0) return out;
  Rat s = v(best);
  for (int j = 0; j < 5; ++j) out(j) = out(j) / s;
  return out;
}

bool vec5_eq(const Vec5& a, const Vec5& b) {
  for (int i = 0; i < 5; ++i)
    if (a(i) != b(i)) return false;
  return true;
}

bool close_linf(const Vec5& a, const Vec5& b, const Rat& tol) {
  for (int i = 0; i < 5; ++i)
    if (abs(a(i) - b(i)) >= tol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Class evaluation helpers.
// ---------------------------------------------------------------------------

// Exact value of the rational function carrying the class, at rational
// coordinates: norm of the numerator form (for norm representatives --
// the square denominator does not move the square class), or the product
// numerator * denominator (for ratio representatives).
Rat carrier_value(const CyclicAlgebraRep& alg, const NumeratorForm& nf,
                  const Vec5& x) {
  NfElem lv(Rat(0));
  for (int i = 0; i < 5; ++i) lv = lv + NfElem(x(i)) * nf.form(i);
  if (alg.denominator_exponent == 1) {
    if (!lv.is_rational())
      throw std::logic_error("ratio representative with non-rational numerator");
    Rat l1v(0);
    for (int i = 0; i < 5; ++i) l1v += alg.denominator(i) * x(i);
    return lv.rational_value() * l1v;
  }
  return nf_norm(lv);
}

UniPoly curve_comb(const std::array<UniPoly, 5>& y,
                   const std::array<Rat, 5>& c) {
  UniPoly acc;
  for (int i = 0; i < 5; ++i)
    if (c[i] != 0) acc = acc + y[i] * c[i];
  return acc;
}

std::optional<Invariant> evaluate_one(const CyclicAlgebraRep& alg,
                                      const NumeratorForm& nf,
                                      const LocalPoint& pt) {
  const Rat eps(alg.eps.value);
  if (!pt.place.real || pt.exact) {
    Rat val = carrier_value(alg, nf, pt.coords);
    if (val == 0) return std::nullopt;
    if (pt.place.real) return Invariant{eps < 0 && val < 0};
    Int vi = Int(val.get_num()) * Int(val.get_den());
    long margin = pt.place.p == 2 ? 3 : 1;
    if (padic_valuation(vi, pt.place.p) + margin > pt.precision)
      return std::nullopt;
    return Invariant{hilbert(eps, val, pt.place) != 1};
  }
  // Real interval point: restrict the carrier to the certificate curve and
  // decide its sign at the isolated parameter exactly.
  const int d = nf.field ? nf.field->degree() : 1;
  UniPoly value_poly;
  if (alg.denominator_exponent == 1) {
    for (int i = 0; i < 5; ++i)
      if (!nf.form(i).is_rational())
        throw std::logic_error(
            "ratio representative with non-rational numerator");
    std::array<Rat, 5> c0, cd;
    for (int i = 0; i < 5; ++i) {
      c0[i] = nf.form(i).is_rational() ? nf.form(i).rational_value() : Rat(0);
      cd[i] = alg.denominator(i);
    }
    value_poly = curve_comb(pt.curve, c0) * curve_comb(pt.curve, cd);
  } else if (d == 1) {
    std::array<Rat, 5> c0;
    for (int i = 0; i < 5; ++i) c0[i] = nf.form(i).coord(0);
    value_poly = curve_comb(pt.curve, c0);
  } else if (d == 2) {
    std::array<Rat, 5> c0, c1;
    for (int i = 0; i < 5; ++i) {
      c0[i] = nf.form(i).coord(0);
      c1[i] = nf.form(i).coord(1);
    }
    UniPoly u0 = curve_comb(pt.curve, c0);
    UniPoly u1 = curve_comb(pt.curve, c1);
    const Rat b = nf.field->min_poly().coeff(1);
    const Rat c = nf.field->min_poly().coeff(0);
    value_poly = u0 * u0 - (u0 * u1) * b + (u1 * u1) * c;
  } else {
    return std::nullopt;
  }
  if (value_poly.is_zero()) return std::nullopt;
  // If the carrier vanishes at the isolated root, this representative is
  // unusable at this point.
  UniPoly common = poly_gcd(value_poly, pt.constraint);
  if (common.degree() >= 1) {
    std::vector<UniPoly> ch = sturm_chain(squarefree_part(common));
    if (pt.hi > pt.lo && sturm_count(ch, pt.lo, pt.hi) > 0)
      return std::nullopt;
    if (pt.hi == pt.lo && common.eval(pt.lo) == 0) return std::nullopt;
  }
  // Shrink the isolating interval until the carrier has constant sign on it.
  UniPoly vsf = squarefree_part(value_poly);
  std::vector<UniPoly> vch = sturm_chain(vsf);
  Rat lo = pt.lo, hi = pt.hi;
  Rat clo = pt.constraint.eval(lo);
  for (int guard = 0; guard < 400; ++guard) {
    if (value_poly.eval(lo) != 0 && value_poly.eval(hi) != 0 &&
        sturm_count(vch, lo, hi) == 0)
      break;
    Rat mid = (lo + hi) / 2;
    Rat cm = pt.constraint.eval(mid);
    if (cm == 0) {
      // Root found exactly: evaluate the carrier there.
      Rat v = value_poly.eval(mid);
      if (v == 0) return std::nullopt;
      return Invariant{eps < 0 && v < 0};
    }
    if ((clo > 0) != (cm > 0)) {
      hi = mid;
    } else {
      lo = mid;
      clo = cm;
    }
  }
  Rat v = value_poly.eval(Rat((lo + hi) / 2));
  if (v == 0) return std::nullopt;
  return Invariant{eps < 0 && v < 0};
}

std::string place_list_string(const std::vector<Place>& pls) {
  std::ostringstream os;
  for (size_t i = 0; i < pls.size(); ++i) {
    if (i) os << ", ";
    os << pls[i].to_string();
  }
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Places.
// ---------------------------------------------------------------------------

Place Place::finite(const Int& p) {
  if (p < 2 || !is_probable_prime(p))
    throw std::invalid_argument("Place::finite: p must be prime");
  Place v;
  v.real = false;
  v.p = p;
  return v;
}

Place Place::real_place() {
  Place v;
  v.real = true;
  return v;
}

std::string Place::to_string() const {
  return real ? std::string("real") : "p=" + p.get_str();
}

// ---------------------------------------------------------------------------
// Hilbert symbols and local squares.
// ---------------------------------------------------------------------------

int hilbert(const Rat& a, const Rat& b, const Place& v) {
  if (a == 0 || b == 0)
    throw std::invalid_argument("hilbert: arguments must be nonzero");
  if (v.real) return (a < 0 && b < 0) ? -1 : 1;
  const Int& p = v.p;
  PadicParts pa = padic_split(a, p), pb = padic_split(b, p);
  const bool alpha = (pa.val % 2) != 0;
  const bool beta = (pb.val % 2) != 0;
  if (p == 2) {
    // Unit arguments mod 8 decide the symbol.
    long u = rat_mod(pa.unit, Int(8)).get_si();
    long w = rat_mod(pb.unit, Int(8)).get_si();
    auto eps2 = [](long x) { return (x % 4) == 3; };   // (x-1)/2 mod 2
    auto omega = [](long x) { return x == 3 || x == 5; };  // (x^2-1)/8 mod 2
    bool e = (eps2(u) && eps2(w)) ^ (alpha && omega(w)) ^ (beta && omega(u));
    return e ? -1 : 1;
  }
  int r = 1;
  if (alpha && beta && ((p - 1) / 2) % 2 != 0) r = -r;
  if (beta) r *= legendre_unit(pa.unit, p);
  if (alpha) r *= legendre_unit(pb.unit, p);
  return r;
}

bool is_local_square(const Rat& a, const Place& v) {
  if (a == 0) throw std::invalid_argument("is_local_square: a must be nonzero");
  if (v.real) return a > 0;
  PadicParts pa = padic_split(a, v.p);
  if (pa.val % 2 != 0) return false;
  if (v.p == 2) return rat_mod(pa.unit, Int(8)) == 1;
  return legendre_unit(pa.unit, v.p) == 1;
}

// ---------------------------------------------------------------------------
// Diagonalization and isotropy over completions.
// ---------------------------------------------------------------------------

std::vector<Rat> diagonalize_gram(const MatX& gram) {
  const int n = static_cast<int>(gram.rows());
  if (gram.cols() != n)
    throw std::invalid_argument("diagonalize_gram: matrix must be square");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (gram(i, j) != gram(j, i))
        throw std::invalid_argument("diagonalize_gram: matrix must be symmetric");
  MatX m = gram;
  for (int k = 0; k < n; ++k) {
    if (m(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (m(i, i) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) {
        // All remaining diagonal entries vanish: bring in an off-diagonal
        // entry by a row-and-column addition, or stop at the radical.
        int oi = -1, oj = -1;
        for (int i = k; i < n && oi < 0; ++i)
          for (int j = i + 1; j < n; ++j)
            if (m(i, j) != 0) {
              oi = i;
              oj = j;
              break;
            }
        if (oi < 0) break;  // zero block
        for (int c = 0; c < n; ++c) m(oi, c) += m(oj, c);
        for (int r = 0; r < n; ++r) m(r, oi) += m(r, oj);
        swap = oi;
      }
      if (swap != k) {
        for (int c = 0; c < n; ++c) std::swap(m(k, c), m(swap, c));
        for (int r = 0; r < n; ++r) std::swap(m(r, k), m(r, swap));
      }
    }
    for (int r = k + 1; r < n; ++r) {
      if (m(r, k) == 0) continue;
      Rat f = m(r, k) / m(k, k);
      for (int c = 0; c < n; ++c) m(r, c) -= f * m(k, c);
      for (int c = 0; c < n; ++c) m(c, r) -= f * m(c, k);
    }
  }
  std::vector<Rat> out(n);
  for (int i = 0; i < n; ++i) out[i] = m(i, i);
  return out;
}

bool locally_solvable(const std::vector<Rat>& diag, const Place& v) {
  std::vector<Rat> c;
  for (const Rat& d : diag)
    if (d != 0) c.push_back(d);
  const int n = static_cast<int>(c.size());
  if (n < 3)
    throw std::invalid_argument(
        "locally_solvable: need at least three nonzero entries");
  if (v.real) {
    bool pos = false, neg = false;
    for (const Rat& d : c) (d > 0 ? pos : neg) = true;
    return pos && neg;
  }
  if (n >= 5) return true;
  Rat d(1);
  for (const Rat& x : c) d *= x;
  int eps = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) eps *= hilbert(c[i], c[j], v);
  if (n == 3) return hilbert(Rat(-1), Rat(-d), v) == eps;
  // n == 4: anisotropic iff d is a square and eps = -(-1,-1)_v.
  return !(is_local_square(d, v) && eps == -hilbert(Rat(-1), Rat(-1), v));
}

// ---------------------------------------------------------------------------
// Local point sampling on the surface.
// ---------------------------------------------------------------------------

namespace {

LocalSample sample_finite(const Pencil& pen, const Place& v, int count,
                          long precision) {
  LocalSample out;
  const Int& p = v.p;
  const long N = std::max<long>(1, precision);
  const size_t want = count <= 0 ? 0 : static_cast<size_t>(count);
  if (want == 0) return out;
  IntGram q1 = make_integral(MatX(pen.m.mat()));
  IntGram q2 = make_integral(MatX(pen.m_tilde.mat()));
  TreeOut tree =
      padic_tree(q1, q2, p, std::max<long>(N, 9), 6000, want * 3 + 8);
  Int pN = int_pow(p, static_cast<unsigned long>(N));
  std::set<std::vector<Int>> seen;
  for (const auto& [st, e] : tree.certified) {
    if (out.points.size() >= want) break;
    long target = std::max<long>(N, st.level);
    auto lifted = newton_lift(q1, q2, p, st, target);
    if (!lifted) continue;
    std::vector<Int> red(5);
    for (int i = 0; i < 5; ++i) red[i] = mod_pos((*lifted)[i], pN);
    if (!seen.insert(red).second) continue;
    LocalPoint lp;
    lp.place = v;
    lp.precision = N;
    for (int i = 0; i < 5; ++i) lp.coords(i) = Rat(red[i]);
    out.points.push_back(std::move(lp));
  }
  if (out.points.size() < want) {
    std::ostringstream os;
    os << "found " << out.points.size() << " of " << want
       << " requested points at " << v.to_string();
    if (tree.died && tree.certified.empty())
      os << " (residue tree died: no points over this completion)";
    else if (tree.truncated)
      os << " (search truncated at the branching budget)";
    out.note = os.str();
  }
  return out;
}

LocalSample sample_real(const Pencil& pen, int count, long precision) {
  LocalSample out;
  const size_t want = count <= 0 ? 0 : static_cast<size_t>(count);
  if (want == 0) return out;
  const long prec = std::max<long>(1, precision);
  // Pencil members lam*m + mu*m_tilde searched for definiteness and for a
  // small rational point to anchor the chord curves.
  const std::vector<std::pair<long, long>> combos = {
      {0, 1}, {1, 0},  {1, 1}, {1, -1}, {2, 1},  {1, 2},  {-1, 2}, {3, 1},
      {1, 3}, {-3, 1}, {2, -1}, {5, 1}, {1, 5},  {2, 3},  {3, -2}, {1, -2}};
  std::vector<Mat5> members;
  for (const auto& [a, b] : combos) {
    Mat5 g;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        g(i, j) = Rat(a) * pen.m.mat()(i, j) + Rat(b) * pen.m_tilde.mat()(i, j);
    members.push_back(g);
  }
  for (size_t mi = 0; mi < members.size(); ++mi) {
    MatX gx = members[mi];
    bool zero = true;
    for (int i = 0; i < 5 && zero; ++i)
      for (int j = 0; j < 5; ++j)
        if (gx(i, j) != 0) {
          zero = false;
          break;
        }
    if (zero) continue;
    if (is_definite_sym(gx)) {
      std::ostringstream os;
      os << "definite pencil member at (lam, mu) = (" << combos[mi].first
         << ", " << combos[mi].second << ") certifies that the surface has no "
         << "real points";
      out.note = os.str();
      return out;
    }
  }
  // Shell scan: exact surface points and per-member rational points.
  IntGram q1 = make_integral(MatX(pen.m.mat()));
  IntGram q2 = make_integral(MatX(pen.m_tilde.mat()));
  std::vector<std::optional<std::array<long, 5>>> anchor(members.size());
  std::vector<Vec5> exacts;
  bool longok = true;
  Int limit = int_pow(Int(2), 40);
  for (int i = 0; i < 5 && longok; ++i)
    for (int j = 0; j < 5; ++j)
      if (abs_int(q1.h[i][j]) > limit || abs_int(q2.h[i][j]) > limit) {
        longok = false;
        break;
      }
  long c1d[5], c1o[5][5], c2d[5], c2o[5][5];
  if (longok) {
    for (int i = 0; i < 5; ++i) {
      c1d[i] = Int(q1.h[i][i] / 2).get_si();
      c2d[i] = Int(q2.h[i][i] / 2).get_si();
      for (int j = 0; j < 5; ++j) {
        c1o[i][j] = q1.h[i][j].get_si();
        c2o[i][j] = q2.h[i][j].get_si();
      }
    }
  }
  const long hmax = longok ? 8 : 3;
  for (long H = 1; H <= hmax; ++H) {
    bool have_anchor = false;
    for (const auto& a : anchor)
      if (a) have_anchor = true;
    if (H > 6 && have_anchor) break;
    std::array<long, 5> x{};
    for (int i = 0; i < 5; ++i) x[i] = -H;
    while (true) {
      long mx = 0;
      for (long c : x) mx = std::max(mx, c < 0 ? -c : c);
      int fn = -1;
      for (int i = 0; i < 5; ++i)
        if (x[i] != 0) {
          fn = i;
          break;
        }
      if (mx == H && fn >= 0 && x[fn] > 0) {
        long u = 0, w = 0;
        if (longok) {
          for (int i = 0; i < 5; ++i) {
            u += c1d[i] * x[i] * x[i];
            w += c2d[i] * x[i] * x[i];
            for (int j = i + 1; j < 5; ++j) {
              u += c1o[i][j] * x[i] * x[j];
              w += c2o[i][j] * x[i] * x[j];
            }
          }
        } else {
          std::vector<Int> xi(5);
          for (int i = 0; i < 5; ++i) xi[i] = x[i];
          u = q_val(q1, xi).get_si();
          w = q_val(q2, xi).get_si();
        }
        if (u == 0 && w == 0) {
          Vec5 pt;
          for (int i = 0; i < 5; ++i) pt(i) = Rat(x[i]);
          Vec5 nn = first_nonzero_normalize(pt);
          bool dup = false;
          for (const Vec5& e : exacts)
            if (vec5_eq(e, nn)) dup = true;
          if (!dup) exacts.push_back(nn);
        } else {
          for (size_t mi = 0; mi < members.size(); ++mi) {
            if (anchor[mi]) continue;
            if (combos[mi].first * u + combos[mi].second * w == 0)
              anchor[mi] = x;
          }
        }
      }
      int d = 0;
      while (d < 5 && ++x[d] > H) {
        x[d] = -H;
        ++d;
      }
      if (d == 5) break;
    }
  }
  std::vector<Vec5> pool;  // max-abs-normalized coordinates for deduplication
  for (const Vec5& e : exacts) {
    if (out.points.size() >= want) break;
    LocalPoint lp;
    lp.place = Place::real_place();
    lp.exact = true;
    lp.precision = prec;
    lp.coords = e;
    out.points.push_back(std::move(lp));
    pool.push_back(maxabs_normalize(e));
  }
  if (out.points.size() >= want) return out;
  int mi = -1;
  for (int pass = 0; pass < 2 && mi < 0; ++pass) {
    for (size_t i = 0; i < members.size(); ++i) {
      if (!anchor[i]) continue;
      if (pass == 0) {
        MatX gx = members[i];
        if (exact_det(gx) == 0) continue;  // prefer nondegenerate members
      }
      mi = static_cast<int>(i);
      break;
    }
  }
  if (mi < 0) {
    out.note =
        "no rational point found on any sampled pencil member; real sampling "
        "budget exhausted with " +
        std::to_string(out.points.size()) + " point(s)";
    return out;
  }
  const Mat5& M = members[mi];
  const Mat5& other =
      combos[mi].second != 0 ? pen.m.mat() : pen.m_tilde.mat();
  Vec5 P0;
  for (int i = 0; i < 5; ++i) P0(i) = Rat((*anchor[mi])[i]);
  const Rat tol(1, 32);
  const Rat width = Rat(Int(1), int_pow(Int(2), static_cast<unsigned long>(prec)));
  std::mt19937_64 rng(0xC0FFEE5EEDULL);
  auto push_exact = [&](const Vec5& raw) {
    Vec5 nn = first_nonzero_normalize(raw);
    Vec5 key = maxabs_normalize(raw);
    for (const Vec5& q : pool)
      if (close_linf(q, key, tol)) return;
    LocalPoint lp;
    lp.place = Place::real_place();
    lp.exact = true;
    lp.precision = prec;
    lp.coords = nn;
    out.points.push_back(std::move(lp));
    pool.push_back(key);
  };
  for (int curve_i = 0; curve_i < 60 && out.points.size() < want; ++curve_i) {
    Vec5 m0, m1;
    bool z0 = true, z1 = true;
    for (int i = 0; i < 5; ++i) {
      long a = static_cast<long>(rng() % 7) - 3;
      long b = static_cast<long>(rng() % 7) - 3;
      m0(i) = Rat(a);
      m1(i) = Rat(b);
      if (a != 0) z0 = false;
      if (b != 0) z1 = false;
    }
    if (z0 || z1) continue;
    // Chord through P0 in direction m(s) = m0 + s*m1 on the member M:
    // y(s) = W(s) P0 - 2 B(s) m(s) satisfies y^T M y = 0 identically.
    Rat w0 = bilinear(M, m0, m0);
    Rat w1 = 2 * bilinear(M, m0, m1);
    Rat w2 = bilinear(M, m1, m1);
    Rat b0 = bilinear(M, P0, m0);
    Rat b1 = bilinear(M, P0, m1);
    std::array<UniPoly, 5> y;
    bool ally0 = true;
    for (int i = 0; i < 5; ++i) {
      y[i] = UniPoly({P0(i) * w0 - 2 * b0 * m0(i),
                      P0(i) * w1 - 2 * (b0 * m1(i) + b1 * m0(i)),
                      P0(i) * w2 - 2 * b1 * m1(i)});
      if (!y[i].is_zero()) ally0 = false;
    }
    if (ally0) continue;
    UniPoly g;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (other(i, j) != 0) g = g + (y[i] * y[j]) * other(i, j);
    if (g.is_zero()) {
      // The whole chord lies on the surface: take small rational parameters.
      for (long sv = 0; sv <= 12 && out.points.size() < want; ++sv) {
        for (long sgn : {1L, -1L}) {
          if (sv == 0 && sgn < 0) continue;
          Rat s(sgn * sv);
          Vec5 pt;
          bool nz = false;
          for (int i = 0; i < 5; ++i) {
            pt(i) = y[i].eval(s);
            if (pt(i) != 0) nz = true;
          }
          if (nz) push_exact(pt);
          if (out.points.size() >= want) break;
        }
      }
      continue;
    }
    UniPoly gs = squarefree_part(g);
    for (const auto& [root, mult] : rational_roots(gs)) {
      if (out.points.size() >= want) break;
      Vec5 pt;
      bool nz = false;
      for (int i = 0; i < 5; ++i) {
        pt(i) = y[i].eval(root);
        if (pt(i) != 0) nz = true;
      }
      if (nz) push_exact(pt);
      gs = divrem(gs, UniPoly({-root, Rat(1)})).first;
    }
    if (out.points.size() >= want) break;
    if (gs.degree() < 1) continue;
    // Roots where the whole coordinate vector vanishes are artifacts of the
    // parameterization, not surface points; strip them.
    UniPoly ygcd = y[0];
    for (int i = 1; i < 5; ++i) ygcd = poly_gcd(ygcd, y[i]);
    if (ygcd.degree() >= 1) {
      UniPoly d = poly_gcd(gs, ygcd);
      while (d.degree() >= 1) {
        gs = divrem(gs, d).first;
        d = poly_gcd(gs, ygcd);
      }
    }
    if (gs.degree() < 1) continue;
    for (const IsolatedRoot& ir : isolate_real_roots(gs)) {
      if (out.points.size() >= want) break;
      IsolatedRoot rr = refine_root(gs, ir, width);
      if (rr.exact) {
        Vec5 pt;
        bool nz = false;
        for (int i = 0; i < 5; ++i) {
          pt(i) = y[i].eval(rr.root);
          if (pt(i) != 0) nz = true;
        }
        if (nz) push_exact(pt);
        continue;
      }
      Rat smid = (rr.lo + rr.hi) / 2;
      Vec5 mid;
      bool nz = false;
      for (int i = 0; i < 5; ++i) {
        mid(i) = y[i].eval(smid);
        if (mid(i) != 0) nz = true;
      }
      if (!nz) continue;
      Vec5 key = maxabs_normalize(mid);
      bool dup = false;
      for (const Vec5& q : pool)
        if (close_linf(q, key, tol)) dup = true;
      if (dup) continue;
      LocalPoint lp;
      lp.place = Place::real_place();
      lp.exact = false;
      lp.curve = y;
      lp.constraint = gs;
      lp.lo = rr.lo;
      lp.hi = rr.hi;
      lp.precision = prec;
      lp.coords = mid;
      out.points.push_back(std::move(lp));
      pool.push_back(key);
    }
  }
  if (out.points.size() < want)
    out.note = "real sampling budget exhausted with " +
               std::to_string(out.points.size()) + " of " +
               std::to_string(want) + " requested point(s)";
  return out;
}

}  // namespace

LocalSample sample_local_points(const Pencil& p, const Place& v, int count,
                                long precision) {
  SmoothnessReport rep = smoothness_check(p);
  if (!rep.smooth)
    throw std::invalid_argument("sample_local_points: surface is singular (" +
                                rep.diagnostic + ")");
  if (v.real) return sample_real(p, count, precision);
  return sample_finite(p, v, count, precision);
}

// ---------------------------------------------------------------------------
// Evaluation of classes at local points.
// ---------------------------------------------------------------------------

std::optional<Invariant> evaluate(const CyclicAlgebraRep& alg,
                                  const LocalPoint& pt) {
  if (alg.eps.is_trivial()) return Invariant{false};
  if (pt.place.real && alg.eps.value > 0) return Invariant{false};
  for (const NumeratorForm& nf : alg.numerators) {
    auto r = evaluate_one(alg, nf, pt);
    if (r) return r;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Brauer-Manin scan.
// ---------------------------------------------------------------------------

BmVerdict bm_scan(const Pencil& p, const BrauerReport& report,
                  long place_budget, int sample_budget) {
  BmVerdict out;
  if (report.order == 1) {
    out.verdict = "trivially unobstructed by Br";
    out.note = "the Brauer group is reduced to constant classes";
    return out;
  }
  if (!report.generators_available || report.generators.empty()) {
    out.verdict = "inconclusive at budget";
    out.note = "no algebra generators available for evaluation";
    return out;
  }
  const auto& gens = report.generators;
  const size_t G = gens.size();
  // Relevant finite places: divisors of the characteristic-form
  // discriminant, of the eps-class norms over the degeneracy scheme, and of
  // the generator eps values.
  std::vector<Int> sources;
  const BinaryQuintic cf = char_form(p);
  const UniPoly f = cf.dehomogenized();
  Rat disc = resultant(f, f.derivative());
  sources.push_back(disc.get_num());
  sources.push_back(disc.get_den());
  sources.push_back(f.leading().get_num());
  sources.push_back(f.leading().get_den());
  DegeneracyScheme ds = degeneracy_scheme(cf);
  for (const NfElem& e : eps_for_scheme(p, ds)) {
    Rat nm = nf_norm(e);
    sources.push_back(nm.get_num());
    sources.push_back(nm.get_den());
  }
  for (const auto& g : gens) sources.push_back(g.eps.value);
  std::vector<Place> places{Place::real_place(), Place::finite(Int(2))};
  for (Int q(3); q <= place_budget; q = next_prime_after(q)) {
    bool rel = false;
    for (const Int& s : sources)
      if (s != 0 && s % q == 0) {
        rel = true;
        break;
      }
    if (rel) places.push_back(Place::finite(q));
  }
  const int budget = sample_budget <= 0 ? 8 : sample_budget;
  auto run_place = [&](const Place& v, int want, long prec0) -> PlaceReport {
    PlaceReport pr;
    pr.place = v;
    pr.certificate = "sampled";
    if (v.real) {
      bool allpos = true;
      for (const auto& g : gens)
        if (!g.eps.is_trivial() && g.eps.value < 0) allpos = false;
      if (allpos) {
        pr.certificate = "positive eps";
        pr.tuples.push_back(std::vector<Invariant>(G, Invariant{false}));
        return pr;
      }
    }
    long prec = prec0;
    for (int attempt = 0; attempt < 3; ++attempt) {
      LocalSample ls = sample_local_points(p, v, want, prec);
      std::set<std::vector<bool>> seen;
      int good = 0;
      bool undetermined = false;
      for (const LocalPoint& pt : ls.points) {
        std::vector<bool> tup;
        bool ok = true;
        for (const auto& g : gens) {
          auto ev = evaluate(g, pt);
          if (!ev) {
            ok = false;
            break;
          }
          tup.push_back(ev->half);
        }
        if (ok) {
          ++good;
          seen.insert(tup);
        } else {
          undetermined = true;
        }
      }
      pr.samples = good;
      pr.tuples.clear();
      for (const auto& t : seen) {
        std::vector<Invariant> row;
        for (bool b : t) row.push_back(Invariant{b});
        pr.tuples.push_back(std::move(row));
      }
      if (!undetermined || ls.points.empty()) break;
      prec *= 2;  // resample at higher precision for the undetermined values
    }
    return pr;
  };
  std::vector<PlaceReport> relevant;
  for (const Place& v : places)
    relevant.push_back(run_place(v, budget, v.real ? 24 : 8));
  // Spot checks: three smallest odd primes off the relevant list should be
  // constant zero by good reduction.
  std::vector<PlaceReport> spots;
  {
    Int q(3);
    while (spots.size() < 3) {
      bool used = false;
      for (const Place& v : places)
        if (!v.real && v.p == q) used = true;
      if (!used) {
        PlaceReport pr = run_place(Place::finite(q), std::min(budget, 6), 8);
        bool allzero = true;
        for (const auto& t : pr.tuples)
          for (const Invariant& iv : t)
            if (iv.half) allzero = false;
        if (pr.samples > 0 && allzero) {
          pr.certificate = "good reduction";
        } else if (pr.samples > 0) {
          out.note += (out.note.empty() ? "" : "; ") +
                      std::string("nonzero invariant at off-list place ") +
                      pr.place.to_string();
        }
        spots.push_back(std::move(pr));
      }
      q = next_prime_after(q);
    }
  }
  // Aggregate: Cartesian product of the observed tuples over the places
  // that contribute (constant-zero places drop out).
  std::vector<const PlaceReport*> agg;
  std::string undecided;
  for (const PlaceReport& pr : relevant) {
    if (pr.certificate == "positive eps") continue;
    if (pr.tuples.empty()) {
      // No evaluable points: either the place is genuinely empty (excluded
      // by a definiteness certificate, making X(A_Q) empty) or the budget
      // ran out.
      if (undecided.empty()) undecided = pr.place.to_string();
      continue;
    }
    bool allzero = true;
    for (const auto& t : pr.tuples)
      for (const Invariant& iv : t)
        if (iv.half) allzero = false;
    if (!allzero) agg.push_back(&pr);
  }
  for (const PlaceReport& pr : spots)
    if (pr.certificate != "good reduction" && !pr.tuples.empty()) {
      bool allzero = true;
      for (const auto& t : pr.tuples)
        for (const Invariant& iv : t)
          if (iv.half) allzero = false;
      if (!allzero) agg.push_back(&pr);
    }
  out.places = relevant;
  for (PlaceReport& pr : spots) out.places.push_back(std::move(pr));
  if (!undecided.empty()) {
    out.verdict = "inconclusive at budget";
    out.note += (out.note.empty() ? "" : "; ") +
                ("no evaluable local points at " + undecided);
    return out;
  }
  constexpr size_t kComboCap = 100000;
  bool pass_found = false;
  bool enumerated_all = true;
  if (agg.empty()) {
    pass_found = true;  // every place is constant zero
  } else {
    std::vector<size_t> idx(agg.size(), 0);
    size_t iterations = 0;
    while (true) {
      if (++iterations > kComboCap) {
        enumerated_all = false;
        break;
      }
      bool allzero = true;
      for (size_t gi = 0; gi < G && allzero; ++gi) {
        bool total = false;
        for (size_t ai = 0; ai < agg.size(); ++ai)
          total ^= agg[ai]->tuples[idx[ai]][gi].half;
        if (total) allzero = false;
      }
      if (allzero) {
        pass_found = true;
        break;
      }
      size_t d = 0;
      while (d < agg.size() && ++idx[d] == agg[d]->tuples.size()) {
        idx[d] = 0;
        ++d;
      }
      if (d == agg.size()) break;
    }
  }
  if (pass_found) {
    out.verdict = "no obstruction at samples";
  } else if (!enumerated_all) {
    out.verdict = "inconclusive at budget";
    out.note += (out.note.empty() ? "" : "; ") +
                std::string("combination cap reached before a conclusion");
  } else {
    bool all_const = true;
    for (const PlaceReport* pr : agg)
      if (pr->tuples.size() > 1) all_const = false;
    if (all_const || G == 1) {
      out.verdict = "obstructed (sampled)";
      out.note += (out.note.empty() ? "" : "; ") +
                  ("every sampled adelic combination over {" +
                   place_list_string(places) + "} has nonzero total invariant");
    } else {
      out.verdict = "inconclusive at budget";
      out.note += (out.note.empty() ? "" : "; ") +
                  std::string(
                      "non-constant local data without a passing combination");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fiber solvability.
// ---------------------------------------------------------------------------

Solvability fiber_local_solvability(const Pencil& p, const Fibration& fib,
                                    const Rat& t, const Place& v,
                                    long precision) {
  Vec5 ell;
  bool zero = true;
  for (int i = 0; i < 5; ++i) {
    ell(i) = fib.l0(i) - t * fib.l1(i);
    if (ell(i) != 0) zero = false;
  }
  if (zero)
    throw std::invalid_argument(
        "fiber_local_solvability: hyperplane degenerates at t");
  std::array<Int, 5> el = primitive_int_vec5(ell);
  auto basis = integer_kernel_basis(el);
  MatX m4 = restrict_gram(p.m.mat(), basis);
  MatX n4 = restrict_gram(p.m_tilde.mat(), basis);
  IntGram q1 = make_integral(m4);
  IntGram q2 = make_integral(n4);
  if (!v.real) {
    long depth = std::max<long>(2, precision);
    TreeOut tree = padic_tree(q1, q2, v.p, depth, 6000, 1);
    if (!tree.certified.empty()) return Solvability::kSolvable;
    if (tree.died && !tree.truncated) return Solvability::kInsolvable;
    return Solvability::kUnknown;
  }
  // Real place: definiteness of a restricted pencil member excludes points.
  const std::vector<std::pair<long, long>> combos = {
      {1, 0}, {0, 1}, {1, 1},  {1, -1}, {2, 1},  {1, 2},  {-1, 2},
      {3, 1}, {1, 3}, {-3, 1}, {2, -1}, {5, 1},  {1, 5},  {3, -2}};
  for (const auto& [a, b] : combos) {
    MatX c(4, 4);
    bool nz = false;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        c(i, j) = Rat(a) * m4(i, j) + Rat(b) * n4(i, j);
        if (c(i, j) != 0) nz = true;
      }
    if (nz && is_definite_sym(c)) return Solvability::kInsolvable;
  }
  // Small integer points on the fiber, recording per-member anchors for the
  // chord search below (the integral models rescale each form by a positive
  // rational, so a*q1 + b*q2 still runs through the restricted pencil).
  std::vector<std::optional<std::array<long, 4>>> anchor(combos.size());
  {
    std::array<long, 4> x{};
    const long H = 6;
    for (int i = 0; i < 4; ++i) x[i] = -H;
    while (true) {
      bool nz = false;
      for (long c : x)
        if (c != 0) nz = true;
      if (nz) {
        std::vector<Int> xi(4);
        for (int i = 0; i < 4; ++i) xi[i] = x[i];
        Int v1 = q_val(q1, xi), v2 = q_val(q2, xi);
        if (v1 == 0 && v2 == 0) return Solvability::kSolvable;
        for (size_t mi = 0; mi < combos.size(); ++mi) {
          if (anchor[mi]) continue;
          if (combos[mi].first * v1 + combos[mi].second * v2 == 0)
            anchor[mi] = x;
        }
      }
      int d = 0;
      while (d < 4 && ++x[d] > H) {
        x[d] = -H;
        ++d;
      }
      if (d == 4) break;
    }
  }
  // Chord search: on a restricted pencil member C with rational point P0,
  // the chords y(s) = W(s) P0 - 2 B(s) m(s) sweep the member, and the
  // independent quadric restricts to a quartic g(s) whose real roots are
  // real points of the fiber.
  auto pair4 = [](const IntGram& q, int i, int j) { return Rat(q.h[i][j]); };
  std::mt19937_64 rng(0xF1BE55EDULL);
  int members_tried = 0;
  for (size_t mi = 0; mi < combos.size() && members_tried < 3; ++mi) {
    if (!anchor[mi]) continue;
    ++members_tried;
    const Rat ca(combos[mi].first), cb(combos[mi].second);
    // Doubled gram of the member and of an independent pencil quadric.
    std::array<std::array<Rat, 4>, 4> C, G;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        C[i][j] = ca * pair4(q1, i, j) + cb * pair4(q2, i, j);
        G[i][j] = cb != 0 ? pair4(q1, i, j) : pair4(q2, i, j);
      }
    std::array<Rat, 4> P0;
    for (int i = 0; i < 4; ++i) P0[i] = Rat((*anchor[mi])[i]);
    auto bil = [](const std::array<std::array<Rat, 4>, 4>& g,
                  const std::array<Rat, 4>& u, const std::array<Rat, 4>& v) {
      Rat s(0);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += u[i] * g[i][j] * v[j];
      return s;
    };
    for (int draw = 0; draw < 24; ++draw) {
      std::array<Rat, 4> m0, m1;
      bool z0 = true, z1 = true;
      for (int i = 0; i < 4; ++i) {
        long a = static_cast<long>(rng() % 7) - 3;
        long b = static_cast<long>(rng() % 7) - 3;
        m0[i] = Rat(a);
        m1[i] = Rat(b);
        if (a) z0 = false;
        if (b) z1 = false;
      }
      if (z0 || z1) continue;
      Rat w0 = bil(C, m0, m0);
      Rat w1 = 2 * bil(C, m0, m1);
      Rat w2 = bil(C, m1, m1);
      Rat b0 = bil(C, P0, m0);
      Rat b1 = bil(C, P0, m1);
      std::array<UniPoly, 4> y;
      bool ally0 = true;
      for (int i = 0; i < 4; ++i) {
        y[i] = UniPoly({P0[i] * w0 - 2 * b0 * m0[i],
                        P0[i] * w1 - 2 * (b0 * m1[i] + b1 * m0[i]),
                        P0[i] * w2 - 2 * b1 * m1[i]});
        if (!y[i].is_zero()) ally0 = false;
      }
      if (ally0) continue;
      UniPoly g;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (G[i][j] != 0) g = g + (y[i] * y[j]) * G[i][j];
      if (g.is_zero()) {
        // The whole chord lies on the fiber; any parameter with a nonzero
        // coordinate vector is a real point.
        for (long s0 : {0L, 1L, -1L, 2L}) {
          for (int i = 0; i < 4; ++i)
            if (y[i].eval(Rat(s0)) != 0) return Solvability::kSolvable;
        }
        continue;
      }
      UniPoly gs = squarefree_part(g);
      // Strip parameter values where the whole coordinate vector vanishes.
      UniPoly ygcd = y[0];
      for (int i = 1; i < 4; ++i) ygcd = poly_gcd(ygcd, y[i]);
      if (ygcd.degree() >= 1) {
        UniPoly d = poly_gcd(gs, ygcd);
        while (d.degree() >= 1) {
          gs = divrem(gs, d).first;
          if (gs.degree() < 1) break;
          d = poly_gcd(gs, ygcd);
        }
      }
      if (gs.degree() < 1) continue;
      std::vector<UniPoly> ch = sturm_chain(gs);
      Rat bnd = cauchy_bound(gs);
      if (sturm_count(ch, -bnd, bnd) > 0) return Solvability::kSolvable;
    }
  }
  return Solvability::kUnknown;
}

// ---------------------------------------------------------------------------
// Reciprocity check at a global point.
// ---------------------------------------------------------------------------

bool reciprocity_check(const Pencil& p, const BrauerReport& report,
                       const Vec5& global_point) {
  bool nonzero = false;
  for (int i = 0; i < 5; ++i)
    if (global_point(i) != 0) nonzero = true;
  if (!nonzero || gram_val(p.m.mat(), global_point) != 0 ||
      gram_val(p.m_tilde.mat(), global_point) != 0)
    throw std::invalid_argument(
        "reciprocity_check: the point does not lie on the surface");
  if (report.generators.empty()) return true;
  std::array<Int, 5> xi = primitive_int_vec5(global_point);
  Vec5 x;
  for (int i = 0; i < 5; ++i) x(i) = Rat(xi[i]);
  for (const CyclicAlgebraRep& g : report.generators) {
    if (g.eps.is_trivial()) continue;
    Rat val(0);
    bool found = false;
    for (const NumeratorForm& nf : g.numerators) {
      Rat v = carrier_value(g, nf, x);
      if (v != 0) {
        val = v;
        found = true;
        break;
      }
    }
    if (!found) return false;  // every representative vanishes at the point
    Int vi = Int(val.get_num()) * Int(val.get_den());
    // Places where either argument of the symbol can be a non-unit.
    std::set<Int> odd;
    for (const auto& [q, e] : factor_integer(abs_int(Int(g.eps.value))))
      if (q != 2) odd.insert(q);
    for (const auto& [q, e] : factor_integer(abs_int(vi)))
      if (q != 2) odd.insert(q);
    std::vector<Place> pls{Place::real_place(), Place::finite(Int(2))};
    for (const Int& q : odd) pls.push_back(Place::finite(q));
    bool total = false;
    std::vector<bool> direct;
    for (const Place& v : pls) {
      bool inv = hilbert(Rat(g.eps.value), val, v) != 1;
      direct.push_back(inv);
      total ^= inv;
    }
    if (total) return false;  // the product formula fails: corrupted data
    // Cross-validate through the evaluator at the induced local points.
    for (size_t pi = 0; pi < pls.size(); ++pi) {
      const Place& v = pls[pi];
      LocalPoint lp;
      lp.place = v;
      if (v.real) {
        lp.exact = true;
        lp.coords = x;
        lp.precision = 1;
      } else {
        long base = padic_valuation(vi, v.p);
        long N = base + (v.p == 2 ? 4 : 2) + 2;
        lp.precision = N;
        Int pN = int_pow(v.p, static_cast<unsigned long>(N));
        for (int i = 0; i < 5; ++i) lp.coords(i) = Rat(mod_pos(xi[i], pN));
      }
      auto ev = evaluate(g, lp);
      if (ev && ev->half != direct[pi]) return false;
    }
  }
  return true;
}

}  // namespace dp4
