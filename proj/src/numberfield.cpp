// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0

#include "dp4/numberfield.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

#include "dp4/factor.hpp"

namespace dp4 {

namespace {

UniPoly coords_to_poly(const std::vector<Rat>& c) { return UniPoly(c); }

std::vector<Rat> poly_to_coords(const UniPoly& p, int d) {
  std::vector<Rat> c(d, Rat(0));
  for (int i = 0; i <= p.degree() && i < d; ++i) c[i] = p.coeff(i);
  return c;
}

long pow_mod(long base, long exp, long p) {
  long r = 1;
  base %= p;
  if (base < 0) base += p;
  while (exp > 0) {
    if (exp & 1) r = r * base % p;
    base = base * base % p;
    exp >>= 1;
  }
  return r;
}

}  // namespace

// ---------- NumberField ----------

FieldPtr NumberField::create(UniPoly min_poly) {
  int d = min_poly.degree();
  if (d < 1 || d > 5)
    throw std::invalid_argument("number field degree must be 1..5");
  if (min_poly.leading() != 1)
    throw std::invalid_argument("minimal polynomial must be monic");
  for (const Rat& c : min_poly.coeffs())
    if (c.get_den() != 1)
      throw std::invalid_argument("minimal polynomial must be integral");
  if (d > 1 && !is_irreducible_q(min_poly))
    throw std::invalid_argument("minimal polynomial must be irreducible");
  return FieldPtr(new NumberField(std::move(min_poly)));
}

FieldPtr NumberField::rationals() {
  static FieldPtr q = create(UniPoly::x());
  return q;
}

std::pair<FieldPtr, NfElem> NumberField::adjoin_root(const UniPoly& p) {
  int n = p.degree();
  if (n < 1 || n > 5) throw std::invalid_argument("adjoin_root: degree must be 1..5");
  if (p.leading() != 1) throw std::invalid_argument("adjoin_root: polynomial must be monic");
  // Smallest d with d^i * coeff(n-i) integral for every i: per prime q in a
  // denominator of coeff(n-i), d needs q^ceil(e/i).
  std::map<Int, unsigned> dexp;
  for (int i = 1; i <= n; ++i) {
    Int den = p.coeff(n - i).get_den();
    if (den == 1) continue;
    for (const auto& [q, e] : factor_integer(den)) {
      unsigned need = (e + i - 1) / i;
      auto it = dexp.find(q);
      if (it == dexp.end() || it->second < need) dexp[q] = need;
    }
  }
  Int d(1);
  for (const auto& [q, e] : dexp) d *= int_pow(q, e);
  if (d == 1) {
    FieldPtr f = create(p);
    return {f, NfElem::generator(f)};
  }
  // integral presentation: M(y) = d^n p(y/d), root of p is θ/d
  std::vector<Rat> mc(n + 1);
  Rat dpow(1);
  for (int i = n; i >= 0; --i) {
    mc[i] = p.coeff(i) * dpow;
    dpow *= Rat(d);
  }
  FieldPtr f = create(UniPoly(std::move(mc)));
  if (n == 1) {
    // p = y - r; the root is just the rational r
    return {f, NfElem(f, -p.coeff(0))};
  }
  std::vector<Rat> root(n, Rat(0));
  root[1] = Rat(1) / Rat(d);
  return {f, NfElem(f, std::move(root))};
}

// ---------- NfElem ----------

NfElem::NfElem(FieldPtr f, std::vector<Rat> coords) : field_(std::move(f)) {
  int d = field_ ? field_->degree() : 1;
  if (static_cast<int>(coords.size()) > d)
    throw std::invalid_argument("coordinate vector longer than field degree");
  coords.resize(d, Rat(0));
  coords_ = std::move(coords);
}

NfElem::NfElem(FieldPtr f, const Rat& c) : field_(std::move(f)) {
  coords_.assign(field_ ? field_->degree() : 1, Rat(0));
  coords_[0] = c;
}

NfElem NfElem::generator(const FieldPtr& f) {
  if (!f) throw std::invalid_argument("generator of null field");
  if (f->degree() == 1) return NfElem(f, -f->min_poly().coeff(0));
  std::vector<Rat> c(f->degree(), Rat(0));
  c[1] = 1;
  return NfElem(f, std::move(c));
}

bool NfElem::is_zero() const {
  for (const Rat& c : coords_)
    if (c != 0) return false;
  return true;
}

bool NfElem::is_rational() const {
  for (size_t i = 1; i < coords_.size(); ++i)
    if (coords_[i] != 0) return false;
  return true;
}

Rat NfElem::rational_value() const {
  if (!is_rational()) throw std::logic_error("element is not rational");
  return coords_[0];
}

namespace {

// Bring two elements over a common field; throws if they belong to
// structurally different fields.
void align(NfElem& a, NfElem& b) {
  if (a.field() == b.field()) return;
  if (!a.field()) {
    a = NfElem(b.field(), a.coords()[0]);
    return;
  }
  if (!b.field()) {
    b = NfElem(a.field(), b.coords()[0]);
    return;
  }
  if (a.field()->min_poly() == b.field()->min_poly()) {
    b = NfElem(a.field(), b.coords());
    return;
  }
  throw std::invalid_argument("arithmetic between different number fields");
}

}  // namespace

NfElem NfElem::operator-() const {
  NfElem out = *this;
  for (Rat& v : out.coords_) v = -v;
  return out;
}

NfElem NfElem::operator+(const NfElem& o) const {
  NfElem a = *this, b = o;
  align(a, b);
  for (size_t i = 0; i < a.coords_.size(); ++i) a.coords_[i] += b.coords_[i];
  return a;
}

NfElem NfElem::operator-(const NfElem& o) const { return *this + (-o); }

NfElem NfElem::operator*(const NfElem& o) const {
  NfElem a = *this, b = o;
  align(a, b);
  if (!a.field_) {
    a.coords_[0] *= b.coords_[0];
    return a;
  }
  UniPoly prod = coords_to_poly(a.coords_) * coords_to_poly(b.coords_);
  UniPoly red = divrem(prod, a.field_->min_poly()).second;
  a.coords_ = poly_to_coords(red, a.field_->degree());
  return a;
}

NfElem NfElem::inverse() const {
  if (is_zero()) throw std::invalid_argument("inverse of zero");
  if (!field_ || field_->degree() == 1) {
    NfElem out = *this;
    out.coords_[0] = Rat(1) / coords_[0];
    return out;
  }
  UniPoly s, t;
  UniPoly g = poly_ext_gcd(coords_to_poly(coords_), field_->min_poly(), &s, &t);
  if (g.degree() != 0)
    throw std::logic_error("inverse: gcd with irreducible min_poly not 1");
  // s/g * x ≡ 1 (mod min_poly); g is already normalized to 1
  UniPoly red = divrem(s, field_->min_poly()).second;
  NfElem out = *this;
  out.coords_ = poly_to_coords(red, field_->degree());
  return out;
}

NfElem NfElem::operator/(const NfElem& o) const {
  NfElem a = *this, b = o;
  align(a, b);
  return a * b.inverse();
}

bool NfElem::operator==(const NfElem& o) const {
  NfElem a = *this, b = o;
  align(a, b);
  return a.coords_ == b.coords_;
}

NfElem NfElem::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  NfElem r(field_, Rat(1));
  NfElem base = *this;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

std::string NfElem::to_string() const {
  return coords_to_poly(coords_).to_string("th");
}

// ---------- norms, traces, characteristic polynomials ----------

NfElem nf_eval(const UniPoly& p, const NfElem& x) {
  NfElem acc;
  for (int i = p.degree(); i >= 0; --i) acc = acc * x + NfElem(p.coeff(i));
  return acc;
}

Rat nf_norm(const NfElem& x) {
  if (!x.field()) return x.coords()[0];
  UniPoly xp = UniPoly(x.coords());
  if (xp.is_zero()) return Rat(0);
  return resultant(x.field()->min_poly(), xp);
}

Rat nf_trace(const NfElem& x) {
  if (!x.field()) return x.coords()[0];
  int d = x.field()->degree();
  const UniPoly& m = x.field()->min_poly();
  UniPoly cur = UniPoly(x.coords());
  Rat tr(0);
  for (int i = 0; i < d; ++i) {
    tr += cur.coeff(i);
    if (i + 1 < d) cur = divrem(cur * UniPoly::x(), m).second;
  }
  return tr;
}

UniPoly nf_charpoly(const NfElem& x) {
  int d = x.degree();
  std::vector<std::pair<Rat, Rat>> pts;
  pts.reserve(d + 1);
  for (int k = 0; k <= d; ++k)
    pts.emplace_back(Rat(k), nf_norm(NfElem(Rat(k)) - x));
  return lagrange_interpolate(pts);
}

// ---------- square testing ----------

namespace {

// Legendre-symbol rejection at primes where the minimal polynomial has a
// simple root: a square must reduce to a quadratic residue. Sound only for
// rejection. Returns true if x is certainly not a square.
bool modular_nonsquare_filter(const NfElem& x) {
  const UniPoly& m = x.field()->min_poly();
  int used = 0;
  for (long p = 3; p < 300 && used < 12; p = next_prime_after(Int(p)).get_si()) {
    bool bad = false;
    for (const Rat& c : x.coords())
      if (c.get_den() % p == 0) bad = true;
    if (bad) continue;
    // simple root of m mod p
    long root = -1;
    for (long r = 0; r < p && root < 0; ++r) {
      long v = 0, powr = 1;
      for (int i = 0; i <= m.degree(); ++i) {
        long ci = static_cast<long>(mpz_fdiv_ui(m.coeff(i).get_num().get_mpz_t(), p));
        v = (v + ci * powr) % p;
        powr = powr * r % p;
      }
      if (v != 0) continue;
      long dv = 0, pw = 1;
      for (int i = 1; i <= m.degree(); ++i) {
        long ci = static_cast<long>(mpz_fdiv_ui(m.coeff(i).get_num().get_mpz_t(), p));
        dv = (dv + static_cast<long>(i % p) * ci % p * pw) % p;
        pw = pw * r % p;
      }
      if (dv % p != 0) root = r;
    }
    if (root < 0) continue;
    ++used;
    // reduce x at θ -> root
    long xv = 0, pw = 1;
    for (const Rat& c : x.coords()) {
      long num = static_cast<long>(mpz_fdiv_ui(c.get_num().get_mpz_t(), p));
      long den = static_cast<long>(mpz_fdiv_ui(c.get_den().get_mpz_t(), p));
      long cv = num * pow_mod(den, p - 2, p) % p;
      xv = (xv + cv * pw) % p;
      pw = pw * root % p;
    }
    if (xv == 0) continue;
    if (pow_mod(xv, (p - 1) / 2, p) == p - 1) return true;
  }
  return false;
}

// Norm polynomial of z² - x with the generator shift j:
// N_j(z) = Norm((z - jθ)² - x), monic of degree 2d, by interpolation.
UniPoly trager_norm_poly(const NfElem& x, long j) {
  int d = x.degree();
  NfElem gen = NfElem::generator(x.field());
  NfElem shift = NfElem(Rat(j)) * gen;
  std::vector<std::pair<Rat, Rat>> pts;
  pts.reserve(2 * d + 1);
  for (int k = 0; k <= 2 * d; ++k) {
    NfElem z{Rat(k)};
    NfElem e = (z - shift) * (z - shift) - x;
    pts.emplace_back(Rat(k), nf_norm(e));
  }
  return lagrange_interpolate(pts);
}

// Finds a shift j making the norm polynomial squarefree and returns its
// factorization; the number of factors equals the number of irreducible
// factors of z² - x over the field.
std::pair<long, QFactorization> trager_factorization(const NfElem& x) {
  for (long j = 0; j <= 101; ++j) {
    UniPoly nj = trager_norm_poly(x, j);
    if (poly_gcd(nj, nj.derivative()).degree() > 0) continue;
    return {j, factor_over_q(nj)};
  }
  throw std::logic_error("no squarefree norm polynomial shift found");
}

// ---------- κ[z] polynomials (coefficients in the field) ----------

using KzPoly = std::vector<NfElem>;

void kz_trim(KzPoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

int kz_deg(const KzPoly& a) { return static_cast<int>(a.size()) - 1; }

KzPoly kz_mul(const KzPoly& a, const KzPoly& b) {
  if (a.empty() || b.empty()) return {};
  KzPoly c(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  kz_trim(c);
  return c;
}

KzPoly kz_mod(KzPoly a, const KzPoly& m) {
  NfElem inv_lc = m.back().inverse();
  while (kz_deg(a) >= kz_deg(m)) {
    NfElem f = a.back() * inv_lc;
    int shift = kz_deg(a) - kz_deg(m);
    for (size_t j = 0; j < m.size(); ++j)
      a[shift + j] = a[shift + j] - f * m[j];
    kz_trim(a);
  }
  return a;
}

KzPoly kz_gcd(KzPoly a, KzPoly b) {
  while (!b.empty()) {
    KzPoly r = kz_mod(std::move(a), b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    NfElem inv = a.back().inverse();
    for (NfElem& c : a) c = c * inv;
  }
  return a;
}

// G(z + a) where G has rational coefficients and a lies in the field.
KzPoly kz_compose_shift(const UniPoly& G, const NfElem& a) {
  KzPoly acc;
  for (int i = G.degree(); i >= 0; --i) {
    // acc = acc * (z + a) + G_i
    KzPoly next(acc.size() + 1);
    for (size_t k = 0; k < acc.size(); ++k) {
      next[k + 1] += acc[k];
      next[k] += acc[k] * a;
    }
    next[0] += NfElem(G.coeff(i));
    acc = std::move(next);
    kz_trim(acc);
  }
  return acc;
}

}  // namespace

bool nf_is_square(const NfElem& x) {
  if (x.is_zero()) return true;
  if (x.degree() == 1) return is_rational_square(x.coords()[0]);
  if (modular_nonsquare_filter(x)) return false;
  auto [j, fact] = trager_factorization(x);
  (void)j;
  return fact.factors.size() >= 2;
}

std::optional<NfElem> nf_sqrt(const NfElem& x) {
  if (x.is_zero()) return NfElem(x.field(), Rat(0));
  if (x.degree() == 1) {
    const Rat& v = x.coords()[0];
    if (!is_rational_square(v)) return std::nullopt;
    Rat r(isqrt(v.get_num()), isqrt(v.get_den()));
    r.canonicalize();
    NfElem out(x.field(), r);
    return out;
  }
  auto [j, fact] = trager_factorization(x);
  if (fact.factors.size() < 2) return std::nullopt;
  // z² - x = ∏ gcd(z² - x, G_i(z + jθ)); a square yields linear factors.
  NfElem gen = NfElem::generator(x.field());
  NfElem a = NfElem(Rat(j)) * gen;
  KzPoly f{-x, NfElem(x.field(), Rat(0)), NfElem(x.field(), Rat(1))};
  for (const auto& [G, mult] : fact.factors) {
    (void)mult;
    KzPoly h = kz_mod(kz_compose_shift(G, a), f);
    KzPoly g = kz_gcd(f, h);
    if (kz_deg(g) == 1) {
      NfElem y = -(g[0] * g[1].inverse());
      if (y * y == x) return y;
      throw std::logic_error("square root candidate failed verification");
    }
  }
  throw std::logic_error("reducible norm polynomial but no linear factor found");
}

std::optional<SquareClassQ> rational_representative(const NfElem& x) {
  if (x.is_zero()) throw std::invalid_argument("representative of zero");
  if (x.degree() == 1) return rational_square_class(x.coords()[0]);
  if (x.degree() > 2) return std::nullopt;
  Rat norm = nf_norm(x);
  if (!is_rational_square(norm)) return std::nullopt;
  if (nf_is_square(x)) return SquareClassQ{Int(1)};
  Rat s(isqrt(norm.get_num()), isqrt(norm.get_den()));
  s.canonicalize();
  Rat t = nf_trace(x);
  Rat first = t - 2 * s, second = t + 2 * s;
  for (const Rat& cand : {first, second}) {
    if (cand == 0) continue;
    if (nf_is_square(NfElem(cand) * x)) return rational_square_class(cand);
  }
  return std::nullopt;
}

}  // namespace dp4
