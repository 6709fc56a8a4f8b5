// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dp4/polynomial.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dp4 {

UniPoly UniPoly::x() { return monomial(1); }

UniPoly UniPoly::monomial(int k, const Rat& a) {
  if (k < 0) throw std::invalid_argument("negative exponent");
  std::vector<Rat> c(k + 1, Rat(0));
  c[k] = a;
  return UniPoly(std::move(c));
}

Rat UniPoly::eval(const Rat& t) const {
  Rat acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

UniPoly UniPoly::operator-() const {
  std::vector<Rat> c(c_);
  for (auto& v : c) v = -v;
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  std::vector<Rat> c(std::max(c_.size(), o.c_.size()), Rat(0));
  for (size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) c[i] += o.c_[i];
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator-(const UniPoly& o) const { return *this + (-o); }

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (c_.empty() || o.c_.empty()) return UniPoly();
  std::vector<Rat> c(c_.size() + o.c_.size() - 1, Rat(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator*(const Rat& s) const {
  if (s == 0) return UniPoly();
  std::vector<Rat> c(c_);
  for (auto& v : c) v *= s;
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator/(const Rat& s) const {
  if (s == 0) throw std::invalid_argument("division by zero scalar");
  return *this * (Rat(1) / s);
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return UniPoly();
  std::vector<Rat> c(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * Rat(static_cast<long>(i));
  return UniPoly(std::move(c));
}

UniPoly UniPoly::monic() const {
  if (c_.empty()) return UniPoly();
  return *this / leading();
}

UniPoly UniPoly::shifted(const Rat& a) const {
  // Horner in (x + a).
  UniPoly acc;
  UniPoly lin(std::vector<Rat>{a, Rat(1)});
  for (auto it = c_.rbegin(); it != c_.rend(); ++it)
    acc = acc * lin + UniPoly(*it);
  return acc;
}

UniPoly UniPoly::scaled_arg(const Rat& s) const {
  std::vector<Rat> c(c_);
  Rat pw(1);
  for (size_t i = 0; i < c.size(); ++i) {
    c[i] *= pw;
    pw *= s;
  }
  return UniPoly(std::move(c));
}

UniPoly UniPoly::reversed() const {
  if (c_.empty()) return UniPoly();
  size_t lo = 0;
  while (c_[lo] == 0) ++lo;
  std::vector<Rat> c(c_.begin() + lo, c_.end());
  std::reverse(c.begin(), c.end());
  return UniPoly(std::move(c));
}

std::string UniPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Rat& a = c_[i];
    if (a == 0) continue;
    if (!first) os << (a > 0 ? " + " : " - ");
    Rat mag = first ? a : Rat(abs(a));
    first = false;
    bool unit_coeff = (mag == 1 || mag == -1) && i > 0;
    if (!unit_coeff)
      os << mag.get_str();
    else if (mag == -1)
      os << "-";
    if (i > 0) {
      if (!unit_coeff) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

std::pair<UniPoly, UniPoly> divrem(const UniPoly& num, const UniPoly& den) {
  if (den.is_zero()) throw std::invalid_argument("polynomial division by zero");
  std::vector<Rat> r(num.coeffs());
  int dd = den.degree();
  int dn = num.degree();
  if (dn < dd) return {UniPoly(), num};
  std::vector<Rat> q(dn - dd + 1, Rat(0));
  Rat inv_lc = Rat(1) / den.leading();
  for (int i = dn; i >= dd; --i) {
    Rat f = r[i] * inv_lc;
    if (f == 0) continue;
    q[i - dd] = f;
    for (int j = 0; j <= dd; ++j) r[i - dd + j] -= f * den.coeff(j);
  }
  return {UniPoly(std::move(q)), UniPoly(std::move(r))};
}

UniPoly poly_gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = divrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Rat resultant(const UniPoly& p0, const UniPoly& q0) {
  if (p0.is_zero() || q0.is_zero()) return Rat(0);
  UniPoly p = p0, q = q0;
  Rat res(1);
  while (q.degree() > 0) {
    UniPoly r = divrem(p, q).second;
    if ((p.degree() & 1) && (q.degree() & 1)) res = -res;
    if (r.is_zero()) return Rat(0);
    res *= rat_pow(q.leading(), p.degree() - r.degree());
    p = std::move(q);
    q = std::move(r);
  }
  // q is a nonzero constant now.
  return res * rat_pow(q.leading(), p.degree());
}

std::vector<std::pair<UniPoly, int>> squarefree_decomposition(const UniPoly& p0) {
  if (p0.is_zero()) throw std::invalid_argument("squarefree decomposition of 0");
  std::vector<std::pair<UniPoly, int>> out;
  UniPoly p = p0.monic();
  if (p.degree() == 0) return out;
  UniPoly g = poly_gcd(p, p.derivative());
  UniPoly b = divrem(p, g).first;
  UniPoly c = divrem(p.derivative(), g).first;
  UniPoly d = c - b.derivative();
  for (int i = 1; b.degree() > 0; ++i) {
    UniPoly gi = poly_gcd(b, d);
    if (gi.degree() > 0) out.emplace_back(gi, i);
    b = divrem(b, gi).first;
    c = divrem(d, gi).first;
    d = c - b.derivative();
  }
  return out;
}

Rat poly_content(const UniPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("content of 0");
  Int num_gcd(0), den_lcm(1);
  for (const Rat& a : p.coeffs()) {
    if (a == 0) continue;
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), a.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), a.get_den().get_mpz_t());
  }
  Rat c(num_gcd, den_lcm);
  c.canonicalize();
  if (p.leading() < 0) c = -c;
  return c;
}

UniPoly primitive_part(const UniPoly& p) { return p / poly_content(p); }

UniPoly poly_ext_gcd(UniPoly a, UniPoly b, UniPoly* s, UniPoly* t) {
  UniPoly s0(Rat(1)), s1, t0, t1(Rat(1));
  while (!b.is_zero()) {
    auto [q, r] = divrem(a, b);
    a = std::move(b);
    b = std::move(r);
    UniPoly ns = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(ns);
    UniPoly nt = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(nt);
  }
  if (a.is_zero()) {
    if (s) *s = UniPoly();
    if (t) *t = UniPoly();
    return a;
  }
  Rat lc = a.leading();
  if (s) *s = s0 / lc;
  if (t) *t = t0 / lc;
  return a / lc;
}

UniPoly lagrange_interpolate(const std::vector<std::pair<Rat, Rat>>& pts) {
  // Newton divided differences, then expansion to the monomial basis.
  size_t n = pts.size();
  if (n == 0) return UniPoly();
  std::vector<Rat> dd(n);
  for (size_t i = 0; i < n; ++i) dd[i] = pts[i].second;
  for (size_t level = 1; level < n; ++level)
    for (size_t i = n - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (pts[i].first - pts[i - level].first);
  UniPoly result(dd[n - 1]);
  for (size_t i = n - 1; i-- > 0;) {
    UniPoly node(std::vector<Rat>{-pts[i].first, Rat(1)});
    result = result * node + UniPoly(dd[i]);
  }
  return result;
}

}  // namespace dp4
