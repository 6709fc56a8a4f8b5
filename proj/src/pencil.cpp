// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dp4/pencil.hpp"

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dp4/factor.hpp"

namespace dp4 {

namespace {

// Coefficients c_j of det(lam*m + mu*m_tilde): the dehomogenization
// det(t*m + m_tilde) has degree <= 5 in t, so six nodes determine it.
std::array<Rat, 6> det_coefficients(const Pencil& p) {
  std::vector<std::pair<Rat, Rat>> nodes;
  nodes.reserve(6);
  for (int k = 0; k <= 5; ++k) {
    Mat5 a;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        a(i, j) = Rat(k) * p.m(i, j) + p.m_tilde(i, j);
    nodes.emplace_back(Rat(k), exact_det(a));
  }
  UniPoly f = lagrange_interpolate(nodes);
  std::array<Rat, 6> c;
  for (int j = 0; j <= 5; ++j) c[j] = f.coeff(5 - j);
  return c;
}

// t*m + m_tilde (finite) or m (at infinity), without the rank check.
NfMat5 specialize_raw(const Pencil& p, const ClosedPoint& t) {
  NfMat5 a;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      a(i, j) = t.at_infinity
                    ? NfElem(p.m(i, j))
                    : t.coord * NfElem(p.m(i, j)) + NfElem(p.m_tilde(i, j));
  return a;
}

}  // namespace

SymMat5::SymMat5(Mat5 e) : e_(std::move(e)) {
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (e_(i, j) != e_(j, i))
        throw std::invalid_argument("SymMat5: matrix is not symmetric");
}

bool BinaryQuintic::is_zero() const {
  for (const Rat& a : c)
    if (a != 0) return false;
  return true;
}

Rat BinaryQuintic::eval(const Rat& lam, const Rat& mu) const {
  Rat s(0);
  for (int j = 0; j <= 5; ++j) s += c[j] * rat_pow(lam, 5 - j) * rat_pow(mu, j);
  return s;
}

UniPoly BinaryQuintic::dehomogenized() const {
  std::vector<Rat> a(6);
  for (int j = 0; j <= 5; ++j) a[5 - j] = c[j];
  return UniPoly(std::move(a));
}

std::string BinaryQuintic::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int j = 0; j <= 5; ++j) {
    if (c[j] == 0) continue;
    Rat a = c[j];
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
      first = false;
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    const int dl = 5 - j;
    const int dm = j;
    const bool unit_coeff = (a == 1);
    if (!unit_coeff) os << a.get_str();
    bool need_star = !unit_coeff;
    if (dl > 0) {
      if (need_star) os << "*";
      os << "lam";
      if (dl > 1) os << "^" << dl;
      need_star = true;
    }
    if (dm > 0) {
      if (need_star) os << "*";
      os << "mu";
      if (dm > 1) os << "^" << dm;
    }
  }
  if (first) os << "0";
  return os.str();
}

std::string ClosedPoint::to_string() const {
  if (at_infinity) return "point [1:0] at infinity";
  std::ostringstream os;
  os << "degree-" << degree << " point, t root of "
     << nf_charpoly(coord).to_string("t");
  return os.str();
}

std::vector<int> DegeneracyScheme::degree_sequence() const {
  std::vector<int> d;
  d.reserve(points.size());
  for (const ClosedPoint& p : points) d.push_back(p.degree);
  return d;
}

BinaryQuintic char_form(const Pencil& p) {
  BinaryQuintic f{det_coefficients(p)};
  if (f.is_zero())
    throw std::domain_error(
        "char_form: determinant vanishes identically (degenerate pencil)");
  return f;
}

DegeneracyScheme degeneracy_scheme(const BinaryQuintic& f) {
  if (f.is_zero())
    throw std::invalid_argument("degeneracy_scheme: zero form");
  UniPoly p = f.dehomogenized();
  const int inf_mult = 5 - p.degree();
  if (inf_mult >= 2)
    throw std::domain_error(
        "degeneracy_scheme: repeated root at infinity (surface singular)");
  DegeneracyScheme s;
  for (const auto& [g, mult] : factor_over_q(p).factors) {
    if (mult >= 2)
      throw std::domain_error("degeneracy_scheme: repeated factor " +
                              g.to_string("t") + " (surface singular)");
    auto [field, root] = NumberField::adjoin_root(g);
    ClosedPoint pt;
    pt.field = std::move(field);
    pt.coord = std::move(root);
    pt.degree = g.degree();
    s.points.push_back(std::move(pt));
  }
  if (inf_mult == 1) {
    ClosedPoint pt;
    pt.field = NumberField::rationals();
    pt.at_infinity = true;
    s.points.push_back(std::move(pt));
  }
  int total = 0;
  for (const ClosedPoint& pt : s.points) total += pt.degree;
  if (total != 5)
    throw std::logic_error("degeneracy_scheme: degrees do not sum to 5");
  return s;
}

SmoothnessReport smoothness_check(const Pencil& p) {
  BinaryQuintic f{det_coefficients(p)};
  if (f.is_zero()) return {false, "characteristic form vanishes identically"};
  UniPoly d = f.dehomogenized();
  if (5 - d.degree() >= 2)
    return {false, "characteristic form has a repeated root at infinity"};
  if (poly_gcd(d, d.derivative()).degree() >= 1)
    return {false, "characteristic form has a repeated factor"};
  for (const ClosedPoint& t : degeneracy_scheme(f).points) {
    const int r = exact_rank(specialize_raw(p, t));
    if (r != 4)
      return {false, t.to_string() + ": degenerate quadric has rank " +
                         std::to_string(r)};
  }
  return {true, "smooth"};
}

NfMat5 specialize(const Pencil& p, const ClosedPoint& t) {
  NfMat5 a = specialize_raw(p, t);
  const int r = exact_rank(a);
  if (r != 4)
    throw std::domain_error("specialize: " + t.to_string() + " gives rank " +
                            std::to_string(r) + ", expected 4");
  return a;
}

BlockDiagonalization block_diagonalize(const Pencil& p) {
  SmoothnessReport rep = smoothness_check(p);
  if (!rep.smooth)
    throw std::domain_error("block_diagonalize: surface not smooth: " +
                            rep.diagnostic);
  DegeneracyScheme s = degeneracy_scheme(char_form(p));
  for (const ClosedPoint& t : s.points)
    if (t.degree >= 4)
      throw std::domain_error("block_diagonalize: closed point of degree " +
                              std::to_string(t.degree) + " not supported");
  BlockDiagonalization out;
  int col = 0;
  for (const ClosedPoint& t : s.points) {
    auto ker = exact_kernel(specialize_raw(p, t));
    if (ker.size() != 1)
      throw std::logic_error("block_diagonalize: kernel is not a line");
    const auto& v = ker[0];
    for (int i = 0; i < t.degree; ++i) {
      NfElem ti = t.at_infinity ? NfElem(Rat(1)) : t.coord.pow(i);
      for (int l = 0; l < 5; ++l) out.u(l, col) = nf_trace(ti * v(l));
      ++col;
    }
    out.sizes.push_back(t.degree);
  }
  if (col != 5 || exact_det(out.u) == 0)
    throw std::logic_error("block_diagonalize: change of basis not invertible");
  Mat5 b = congruence(p.m.mat(), out.u);
  Mat5 bt = congruence(p.m_tilde.mat(), out.u);
  int off = 0;
  for (int sz : out.sizes) {
    for (int i = off; i < off + sz; ++i)
      for (int j = 0; j < 5; ++j)
        if ((j < off || j >= off + sz) && (b(i, j) != 0 || bt(i, j) != 0))
          throw std::logic_error("block_diagonalize: result not block diagonal");
    off += sz;
  }
  out.blocks = Pencil{SymMat5(b), SymMat5(bt)};
  return out;
}

}  // namespace dp4
