// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dp4/quadric.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dp4 {
namespace {

// Caps keeping the smooth-point search bounded regardless of the requested
// height: the per-field candidate value list is truncated once it exceeds
// kValueCap entries, and at most kCandidateBudget candidate points are
// examined per call.  Both cutoffs are fixed, so results stay deterministic.
constexpr std::size_t kValueCap = 2000;
constexpr long kCandidateBudget = 5000000;

FieldPtr field_of(const NfMat5& m) {
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (m(i, j).field()) return m(i, j).field();
  return nullptr;
}

int first_nonzero(const NfVec5& v) {
  for (int i = 0; i < 5; ++i)
    if (!v(i).is_zero()) return i;
  return -1;
}

// Whether x is a scalar multiple of ref, where ref has first nonzero
// coordinate 1 at index f.  A zero x counts as a multiple.
bool is_multiple_of(const NfVec5& x, const NfVec5& ref, int f) {
  const NfElem& s = x(f);
  for (int i = 0; i < 5; ++i)
    if (x(i) != s * ref(i)) return false;
  return true;
}

// Scales a nonzero vector so that every rational coordinate of every entry is
// an integer, the overall content is 1, and the first nonzero rational
// coordinate is positive.  Returns the scaled vector and the applied rational
// factor t (out = t * in).
std::pair<NfVec5, Rat> normalize_with_scale(const NfVec5& v) {
  Int den_lcm(1);
  for (int i = 0; i < 5; ++i)
    for (const Rat& r : v(i).coords())
      if (r != 0) den_lcm = lcm(den_lcm, Int(r.get_den()));
  Int num_gcd(0);
  int sign = 0;
  for (int i = 0; i < 5; ++i)
    for (const Rat& r : v(i).coords()) {
      if (r == 0) continue;
      Int scaled_num = r.get_num() * (den_lcm / r.get_den());
      num_gcd = gcd(num_gcd, scaled_num);
      if (sign == 0) sign = scaled_num > 0 ? 1 : -1;
    }
  if (sign == 0) throw std::logic_error("normalize_with_scale: zero vector");
  Rat t(den_lcm, num_gcd);
  t.canonicalize();
  if (sign < 0) t = -t;
  NfVec5 out;
  for (int i = 0; i < 5; ++i) out(i) = t * v(i);
  return {out, t};
}

NfVec5 normalize_vector(const NfVec5& v) { return normalize_with_scale(v).first; }

int rat_height(const Rat& r) {
  if (r == 0) return 0;
  Int n = abs(r.get_num());
  Int d = r.get_den();
  Int m = n > d ? n : d;
  return static_cast<int>(m.get_si());
}

// Reduced rationals n/d with max(|n|, d) equal to lev for lev = 0 (just 0),
// 1, ..., h, ordered by level, then numerator, then denominator.
std::vector<Rat> rational_ladder(int h) {
  std::vector<Rat> out{Rat(0)};
  for (long lev = 1; lev <= h; ++lev)
    for (long n = -lev; n <= lev; ++n) {
      if (n == 0) continue;
      for (long d = 1; d <= lev; ++d) {
        if (std::max(std::labs(n), d) != lev) continue;
        if (std::gcd(std::labs(n), d) != 1) continue;
        out.emplace_back(n, d);
      }
    }
  return out;
}

struct LadderValue {
  NfElem v;
  int level;
};

// Field elements whose power-basis coordinates are ladder rationals of height
// at most h, tagged with their level (the maximum coordinate height) and
// sorted by level; ties keep the coordinate-tuple enumeration order.  The
// list is truncated at kValueCap entries (after sorting, so low levels stay
// complete).
std::vector<LadderValue> value_ladder(const FieldPtr& fld, int h) {
  const std::vector<Rat> rats = rational_ladder(h);
  const int deg = fld ? fld->degree() : 1;
  std::vector<LadderValue> out;
  if (deg == 1) {
    out.reserve(rats.size());
    for (const Rat& r : rats)
      out.push_back({fld ? NfElem(fld, r) : NfElem(r), rat_height(r)});
  } else {
    std::vector<std::size_t> idx(deg, 0);
    while (true) {
      std::vector<Rat> coords(deg);
      int lev = 0;
      for (int t = 0; t < deg; ++t) {
        coords[t] = rats[idx[t]];
        lev = std::max(lev, rat_height(coords[t]));
      }
      out.push_back({NfElem(fld, std::move(coords)), lev});
      if (out.size() >= 4 * kValueCap) break;  // sort below keeps the low levels
      int t = deg - 1;
      while (t >= 0 && ++idx[t] == rats.size()) {
        idx[t] = 0;
        --t;
      }
      if (t < 0) break;
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const LadderValue& a, const LadderValue& b) { return a.level < b.level; });
  if (out.size() > kValueCap) out.resize(kValueCap);
  return out;
}

}  // namespace

NfVec5 vertex(const NfMat5& gram) {
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (gram(i, j) != gram(j, i))
        throw std::invalid_argument("vertex: gram matrix is not symmetric");
  const int r = exact_rank(gram);
  if (r != 4)
    throw std::domain_error("vertex: quadric has rank " + std::to_string(r) +
                            ", expected exactly 4");
  const auto ker = exact_kernel(gram);
  if (ker.size() != 1) throw std::logic_error("vertex: kernel dimension mismatch");
  NfVec5 v;
  for (int i = 0; i < 5; ++i) v(i) = ker[0](i);
  const int f = first_nonzero(v);
  if (f < 0) throw std::logic_error("vertex: zero kernel vector");
  const NfElem inv = v(f).inverse();
  for (int i = 0; i < 5; ++i) v(i) = v(i) * inv;
  return v;
}

Rank4Quadric rank4_quadric(const NfMat5& gram) {
  Rank4Quadric q;
  q.gram = gram;
  q.vertex = vertex(gram);
  return q;
}

NfElem discriminant_eps_at(const Rank4Quadric& q, int i) {
  if (i < 0 || i > 4)
    throw std::invalid_argument("discriminant_eps_at: index out of range");
  if (q.vertex(i).is_zero())
    throw std::invalid_argument(
        "discriminant_eps_at: coordinate hyperplane contains the vertex");
  NfMatX m(4, 4);
  int r = 0;
  for (int a = 0; a < 5; ++a) {
    if (a == i) continue;
    int c = 0;
    for (int b = 0; b < 5; ++b) {
      if (b == i) continue;
      m(r, c) = q.gram(a, b);
      ++c;
    }
    ++r;
  }
  return exact_det(m);
}

NfElem discriminant_eps(const Rank4Quadric& q) {
  const int f = first_nonzero(q.vertex);
  if (f < 0) throw std::invalid_argument("discriminant_eps: quadric has no vertex set");
  return discriminant_eps_at(q, f);
}

std::optional<NfVec5> find_smooth_point(const Rank4Quadric& q, int height_bound) {
  const FieldPtr fld = field_of(q.gram);
  const std::vector<LadderValue> values = value_ladder(fld, std::max(height_bound, 0));
  // Prefix sizes per level: values with level <= L occupy a prefix.
  std::vector<std::size_t> prefix(static_cast<std::size_t>(std::max(height_bound, 0)) + 1, 0);
  for (std::size_t n = 0; n < values.size(); ++n)
    for (int l = values[n].level; l <= height_bound; ++l) prefix[l] = n + 1;
  const int vf = first_nonzero(q.vertex);
  const NfElem one(Rat(1));
  long budget = kCandidateBudget;

  for (int level = 0; level <= height_bound; ++level) {
    const std::size_t lim_full = prefix[level];
    if (level > 0 && lim_full == prefix[level - 1]) continue;  // no new values
    for (int j = 0; j < 5; ++j) {        // first enumerated coordinate, pinned to 1
      for (int k = 0; k < 5; ++k) {      // coordinate solved from the quadratic
        if (k == j) continue;
        std::array<int, 3> pos{};
        int np = 0;
        for (int m = 0; m < 5; ++m)
          if (m != j && m != k) pos[np++] = m;
        // Coordinates before the pinned one are zero; later ones range over
        // the ladder prefix for this level.
        std::array<std::size_t, 3> lim{};
        for (int t = 0; t < 3; ++t) lim[t] = pos[t] < j ? 1 : lim_full;
        std::array<std::size_t, 3> idx{0, 0, 0};
        while (true) {
          int maxlev = std::max({values[idx[0]].level, values[idx[1]].level,
                                 values[idx[2]].level});
          if (maxlev == level) {
            if (--budget < 0) return std::nullopt;
            NfVec5 x;
            x(j) = one;
            for (int t = 0; t < 3; ++t) x(pos[t]) = values[idx[t]].v;
            // (x + s e_k)^T G (x + s e_k) = a s^2 + b s + cc with x_k = 0.
            const NfElem& a = q.gram(k, k);
            NfElem b, cc;
            for (int m = 0; m < 5; ++m) {
              if (m == k || x(m).is_zero()) continue;
              b += q.gram(k, m) * x(m);
              for (int n = 0; n < 5; ++n) {
                if (n == k || x(n).is_zero()) continue;
                cc += q.gram(m, n) * x(m) * x(n);
              }
            }
            b += b;
            std::optional<NfElem> roots[2];
            if (a.is_zero()) {
              if (!b.is_zero())
                roots[0] = -(cc / b);
              else if (cc.is_zero())
                roots[0] = NfElem();  // the whole line lies on the quadric
            } else {
              NfElem disc = b * b - Rat(4) * a * cc;
              if (nf_is_square(disc)) {
                NfElem root = *nf_sqrt(disc);
                NfElem inv2a = (Rat(2) * a).inverse();
                roots[0] = (-b + root) * inv2a;
                if (!root.is_zero()) roots[1] = (-b - root) * inv2a;
              }
            }
            for (const auto& s : roots) {
              if (!s) continue;
              x(k) = *s;
              if (!is_multiple_of(x, q.vertex, vf)) return normalize_vector(x);
            }
          }
          int t = 2;
          while (t >= 0 && ++idx[t] == lim[t]) {
            idx[t] = 0;
            --t;
          }
          if (t < 0) break;
        }
      }
    }
  }
  return std::nullopt;
}

TangentDatum tangent_form(const Rank4Quadric& q, const NfVec5& p) {
  if (first_nonzero(p) < 0)
    throw std::invalid_argument("tangent_form: zero point");
  NfVec5 gp;
  for (int i = 0; i < 5; ++i) {
    for (int m = 0; m < 5; ++m) gp(i) += q.gram(i, m) * p(m);
  }
  NfElem val;
  for (int i = 0; i < 5; ++i) val += p(i) * gp(i);
  if (!val.is_zero())
    throw std::invalid_argument("tangent_form: point does not lie on the quadric");
  if (is_multiple_of(p, q.vertex, first_nonzero(q.vertex)))
    throw std::invalid_argument("tangent_form: no tangent hyperplane at the vertex");
  TangentDatum td;
  td.point = p;
  td.form = normalize_vector(gp);
  return td;
}

NormalForm normal_form(const Rank4Quadric& q, const TangentDatum& td) {
  // Revalidate the datum; this also checks the point lies on the quadric.
  const TangentDatum ref = tangent_form(q, td.point);
  for (int i = 0; i < 5; ++i)
    if (ref.form(i) != td.form(i))
      throw std::invalid_argument("normal_form: form is not the tangent form at the point");

  const NfVec5& l1 = td.form;
  const int wi = first_nonzero(l1);
  const NfElem& l1w = l1(wi);
  const NfElem& qw = q.gram(wi, wi);
  // Split off the tangent factor: Q(x) = l1(x) * l2s(x) + q2(x) where q2 has
  // rank exactly 2 and its radical contains the base point and the vertex.
  NfVec5 l2s;
  for (int m = 0; m < 5; ++m)
    l2s(m) = (Rat(2) * q.gram(wi, m) - (qw / l1w) * l1(m)) / l1w;
  NfMat5 g2 = q.gram;
  for (int m = 0; m < 5; ++m)
    for (int n = 0; n < 5; ++n)
      g2(m, n) -= Rat(1, 2) * (l1(m) * l2s(n) + l2s(m) * l1(n));
  if (exact_rank(g2) != 2)
    throw std::logic_error("normal_form: residual form does not have rank 2");

  // Diagonalize the rank-2 residual: q2 = a1*m1(x)^2 + a2*m2(x)^2.
  NfElem a1, a2;
  NfVec5 m1, m2;
  int di = -1;
  for (int i = 0; i < 5 && di < 0; ++i)
    if (!g2(i, i).is_zero()) di = i;
  if (di >= 0) {
    a1 = g2(di, di);
    for (int m = 0; m < 5; ++m) m1(m) = g2(di, m) / a1;
    NfMat5 g3 = g2;
    for (int m = 0; m < 5; ++m)
      for (int n = 0; n < 5; ++n) g3(m, n) -= a1 * m1(m) * m1(n);
    int dl = -1;
    for (int i = 0; i < 5 && dl < 0; ++i)
      if (!g3(i, i).is_zero()) dl = i;
    if (dl < 0) throw std::logic_error("normal_form: residual rank-1 form vanished");
    a2 = g3(dl, dl);
    for (int m = 0; m < 5; ++m) m2(m) = g3(dl, m) / a2;
    for (int m = 0; m < 5; ++m)
      for (int n = 0; n < 5; ++n)
        if (g3(m, n) != a2 * m2(m) * m2(n))
          throw std::logic_error("normal_form: rank-2 diagonalization failed");
  } else {
    // Zero diagonal: the residual is a hyperbolic plane 2*x^T u * x^T w / b.
    int hi = -1, hl = -1;
    for (int i = 0; i < 5 && hi < 0; ++i)
      for (int l = 0; l < 5 && hi < 0; ++l)
        if (!g2(i, l).is_zero()) {
          hi = i;
          hl = l;
        }
    if (hi < 0) throw std::logic_error("normal_form: residual form vanished");
    const NfElem& b = g2(hi, hl);
    NfVec5 u, w;
    for (int m = 0; m < 5; ++m) {
      u(m) = g2(hi, m);
      w(m) = g2(hl, m);
    }
    for (int m = 0; m < 5; ++m)
      for (int n = 0; n < 5; ++n)
        if (g2(m, n) != (u(m) * w(n) + w(m) * u(n)) / b)
          throw std::logic_error("normal_form: hyperbolic split failed");
    a1 = Rat(2) * b.inverse();
    a2 = -a1;
    for (int m = 0; m < 5; ++m) {
      m1(m) = Rat(1, 2) * (u(m) + w(m));
      m2(m) = Rat(1, 2) * (u(m) - w(m));
    }
  }

  // c0*Q = l1*(c0*l2s) - m1^2 + (-a2/a1)*m2^2 with c0 = -1/a1; rescale m1 and
  // m2 to integral coprime forms, folding the factors into c, l2 and eps.
  const NfElem c0 = -(a1.inverse());
  const NfElem eps0 = -(a2 / a1);
  auto [l3, t3] = normalize_with_scale(m1);
  NfVec5 m2s;
  for (int m = 0; m < 5; ++m) m2s(m) = t3 * m2(m);
  auto [l4, t4] = normalize_with_scale(m2s);

  const Rat t3sq = t3 * t3;
  const Rat t4sq = t4 * t4;
  NormalForm nf;
  nf.c = t3sq * c0;
  nf.l1 = l1;
  for (int m = 0; m < 5; ++m) nf.l2(m) = t3sq * (c0 * l2s(m));
  nf.l3 = l3;
  nf.l4 = l4;
  nf.eps = eps0 / NfElem(t4sq);

  // Exact verification: c*G == sym(l1,l2) - l3 l3^T + eps l4 l4^T.
  for (int m = 0; m < 5; ++m)
    for (int n = 0; n < 5; ++n) {
      NfElem rhs = Rat(1, 2) * (nf.l1(m) * nf.l2(n) + nf.l2(m) * nf.l1(n)) -
                   nf.l3(m) * nf.l3(n) + nf.eps * nf.l4(m) * nf.l4(n);
      if (nf.c * q.gram(m, n) != rhs)
        throw std::logic_error("normal_form: decomposition identity failed");
    }
  NfMatX rows(4, 5);
  for (int m = 0; m < 5; ++m) {
    rows(0, m) = nf.l1(m);
    rows(1, m) = nf.l2(m);
    rows(2, m) = nf.l3(m);
    rows(3, m) = nf.l4(m);
  }
  if (exact_rank(rows) != 4)
    throw std::logic_error("normal_form: forms are not independent");
  if (!nf_is_square(nf.eps * discriminant_eps(q)))
    throw std::logic_error("normal_form: eps disagrees with the discriminant class");
  return nf;
}

NfVec5 second_tangent_sheet(const NormalForm& nf) { return nf.l2; }

}  // namespace dp4
