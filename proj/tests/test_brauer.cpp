// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "dp4/brauer.hpp"
#include "dp4/pencil.hpp"
#include "dp4/quadric.hpp"

using namespace dp4;

namespace {

Mat5 m5(const std::array<long, 25>& v) {
  Mat5 m;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m(i, j) = Rat(v[i * 5 + j]);
  return m;
}

NfVec5 promote(const Vec5& v) {
  NfVec5 out;
  for (int i = 0; i < 5; ++i) out(i) = NfElem(v(i));
  return out;
}

Vec5 vec5(long a, long b, long c, long d, long e) {
  Vec5 v;
  v(0) = Rat(a);
  v(1) = Rat(b);
  v(2) = Rat(c);
  v(3) = Rat(d);
  v(4) = Rat(e);
  return v;
}

bool nf_vec_eq(const NfVec5& x, const NfVec5& y) {
  for (int i = 0; i < 5; ++i)
    if (x(i) != y(i)) return false;
  return true;
}

bool vec_eq(const Vec5& x, const Vec5& y) {
  for (int i = 0; i < 5; ++i)
    if (x(i) != y(i)) return false;
  return true;
}

// Gram matrices of x0*x1 + x2*x3 + x4^2 and
// -x0^2 - 3x1^2 + x2^2 - x2*x3 + 2x3^2 + 2x3*x4 (doubled diagonal).
Pencil worked_example() {
  Mat5 m = m5({0, 1, 0, 0, 0,
               1, 0, 0, 0, 0,
               0, 0, 0, 1, 0,
               0, 0, 1, 0, 0,
               0, 0, 0, 0, 2});
  Mat5 mt = m5({-2, 0, 0, 0, 0,
                0, -6, 0, 0, 0,
                0, 0, 2, -1, 0,
                0, 0, -1, 4, 2,
                0, 0, 0, 2, 0});
  return {SymMat5(m), SymMat5(mt)};
}

// Gram matrices of x2^2 - 5x0^2 - x3*x4 and
// x2^2 - 5x1^2 - (x3 + x4)(x3 + 2x4).
Pencil bsd_surface() {
  Mat5 m = m5({-10, 0, 0, 0, 0,
               0, 0, 0, 0, 0,
               0, 0, 2, 0, 0,
               0, 0, 0, 0, -1,
               0, 0, 0, -1, 0});
  Mat5 mt = m5({0, 0, 0, 0, 0,
                0, -10, 0, 0, 0,
                0, 0, 2, 0, 0,
                0, 0, 0, -2, -3,
                0, 0, 0, -3, -4});
  return {SymMat5(m), SymMat5(mt)};
}

Pencil diagonal_pencil() {
  Mat5 a = Mat5::Zero();
  Mat5 b = Mat5::Zero();
  for (int i = 0; i < 5; ++i) {
    a(i, i) = Rat(1);
    b(i, i) = Rat(i + 1);
  }
  return {SymMat5(a), SymMat5(b)};
}

// Characteristic form with an irreducible quintic factor.
Pencil degree5_pencil() {
  Mat5 m = Mat5::Zero();
  for (int i = 0; i < 5; ++i) m(i, i) = Rat(2);
  Mat5 mt = m5({0, 1, 0, 0, 0,
                1, 0, 1, 0, 0,
                0, 1, 0, 1, 0,
                0, 0, 1, 0, 1,
                0, 0, 0, 1, 2});
  return {SymMat5(m), SymMat5(mt)};
}

// Characteristic form 32(t + 3)(t^4 + t^3 - 3t^2 - t + 1): one rational
// point and one degree-4 point.
Pencil quartic_point_pencil() {
  Mat5 m = Mat5::Zero();
  for (int i = 0; i < 5; ++i) m(i, i) = Rat(2);
  Mat5 mt = m5({6, 0, 0, 0, 0,
                0, 0, 2, 0, 0,
                0, 2, 0, 2, 0,
                0, 0, 2, 2, 2,
                0, 0, 0, 2, 0});
  return {SymMat5(m), SymMat5(mt)};
}

// Diagonal forms sum a_i x_i^2 and sum b_i x_i^2 with sum a = sum b = 0, so
// (1:1:1:1:1) lies on the surface. Characteristic form
// -64(t - 4)(t + 1)(t + 3)(3t + 2)(3t + 4); the eps classes at the five
// rational points are (-5, -5, -5, 15, -3).
Pencil planted_order4() {
  const long a[5] = {1, 1, 1, 3, -6};
  const long b[5] = {-4, 1, 3, 4, -4};
  Mat5 m = Mat5::Zero();
  Mat5 mt = Mat5::Zero();
  for (int i = 0; i < 5; ++i) {
    m(i, i) = Rat(2 * a[i]);
    mt(i, i) = Rat(2 * b[i]);
  }
  return {SymMat5(m), SymMat5(mt)};
}

ClosedPoint rational_point(long t) {
  ClosedPoint pt;
  pt.field = NumberField::rationals();
  pt.coord = NfElem(pt.field, Rat(t));
  pt.degree = 1;
  return pt;
}

}  // namespace

TEST_CASE("eps values and the norm product relation on the worked example") {
  const Pencil p = worked_example();
  const DegeneracyScheme ds = degeneracy_scheme(char_form(p));
  REQUIRE(ds.points.size() == 2);
  CHECK(ds.points[0].degree == 2);
  CHECK(ds.points[1].degree == 3);
  CHECK(ds.points[0].field->min_poly() == UniPoly({Rat(-12), Rat(0), Rat(1)}));

  const std::vector<NfElem> eps = eps_for_scheme(p, ds);
  REQUIRE(eps.size() == 2);
  // eps at the degree-2 point is 60*theta - 240 = 120*sqrt(3) - 240 (theta =
  // sqrt(12)); its norm is 14400 and its rational square class is -5.
  CHECK(eps[0] == NfElem(ds.points[0].field, {Rat(-240), Rat(60)}));
  CHECK(nf_norm(eps[0]) == Rat(14400));
  CHECK(!nf_is_square(eps[0]));
  auto rep0 = rational_representative(eps[0]);
  REQUIRE(rep0.has_value());
  CHECK(rep0->value == Int(-5));
  CHECK(nf_norm(eps[1]) == Rat(6400));
  CHECK(!nf_is_square(eps[1]));
  CHECK(product_norm_check(ds, eps));

  // Scaling one eps by 1 + theta multiplies the norm product by -2.
  std::vector<NfElem> bad = eps;
  bad[0] = bad[0] * (NfElem(ds.points[0].field, Rat(1)) +
                     NfElem::generator(ds.points[0].field));
  CHECK(!product_norm_check(ds, bad));
}

TEST_CASE("enumerate_star finds exactly the degree-2 point on the worked example") {
  const Pencil p = worked_example();
  const DegeneracyScheme ds = degeneracy_scheme(char_form(p));
  const std::vector<NfElem> eps = eps_for_scheme(p, ds);
  const std::vector<StarScheme> out = enumerate_star(ds, eps);
  REQUIRE(out.size() == 1);
  CHECK(out[0].points.size() == 1);
  CHECK(out[0].points[0].degree == 2);
  CHECK(out[0].indices == std::vector<int>{0});
  CHECK(out[0].total_degree() == 2);
  CHECK(out[0].rational_eps.value == Int(-5));
  CHECK(out[0].norm_product_class.is_trivial());
  // Re-verify the defining conditions from scratch.
  CHECK(!nf_is_square(out[0].eps[0]));
  CHECK(rational_square_class(nf_norm(out[0].eps[0])).is_trivial());
  // rational_eps * eps is a square in the residue field.
  CHECK(nf_is_square(NfElem(Rat(out[0].rational_eps.value)) * out[0].eps[0]));
}

TEST_CASE("enumerate_star rejects mismatched and square classes") {
  DegeneracyScheme ds;
  for (long t = 0; t < 5; ++t) ds.points.push_back(rational_point(t));
  std::vector<NfElem> eps;
  for (long v : {2, 3, 5, 7, 210}) eps.emplace_back(Rat(v));
  CHECK(enumerate_star(ds, eps).empty());  // pairwise products nonsquare

  DegeneracyScheme two;
  two.points = {rational_point(0), rational_point(1)};
  std::vector<NfElem> squares{NfElem(Rat(4)), NfElem(Rat(9))};
  CHECK(enumerate_star(two, squares).empty());  // classes trivial

  std::vector<NfElem> matching{NfElem(Rat(3)), NfElem(Rat(12))};
  const auto out = enumerate_star(two, matching);
  REQUIRE(out.size() == 1);
  CHECK(out[0].rational_eps.value == Int(3));
  CHECK(out[0].indices == std::vector<int>({0, 1}));
}

TEST_CASE("sparse_tangent lands on few-coordinate forms for the BSD quadrics") {
  const Pencil p = bsd_surface();
  // t = 0 member: x2^2 - 5x1^2 - (x3 + x4)(x3 + 2x4), vertex e0.
  const Rank4Quadric q0 = rank4_quadric(specialize(p, rational_point(0)));
  auto td0 = sparse_tangent(q0);
  REQUIRE(td0.has_value());
  CHECK(nf_vec_eq(td0->form, promote(vec5(0, 0, 0, 1, 1))));
  // The datum re-verifies: the stored point lies on the quadric and has the
  // stored polar form.
  CHECK(nf_vec_eq(tangent_form(q0, td0->point).form, td0->form));

  // Infinity member: x2^2 - 5x0^2 - x3*x4, vertex e1.
  ClosedPoint inf;
  inf.field = NumberField::rationals();
  inf.at_infinity = true;
  inf.degree = 1;
  const Rank4Quadric qi = rank4_quadric(specialize(p, inf));
  auto tdi = sparse_tangent(qi);
  REQUIRE(tdi.has_value());
  CHECK(nf_vec_eq(tdi->form, promote(vec5(0, 0, 0, 1, 0))));

  // An anisotropic member has no rational point at all, so no sparse
  // tangent either.
  const Rank4Quadric aniso =
      rank4_quadric(specialize(diagonal_pencil(), rational_point(-1)));
  CHECK(!sparse_tangent(aniso, 5).has_value());
}

TEST_CASE("vertical_fibration on the BSD pair spans {x3, x4}") {
  const Pencil p = bsd_surface();
  const DegeneracyScheme ds = degeneracy_scheme(char_form(p));
  const std::vector<NfElem> eps = eps_for_scheme(p, ds);
  const std::vector<StarScheme> schemes = enumerate_star(ds, eps);
  REQUIRE(schemes.size() == 1);
  const StarScheme& ss = schemes[0];
  REQUIRE(ss.points.size() == 2);
  CHECK(ss.points[0].coord.rational_value() == Rat(0));
  CHECK(ss.points[1].at_infinity);
  CHECK(ss.rational_eps.value == Int(5));

  // Crafted tangent data pinned independently of search order.
  const Rank4Quadric q0 = rank4_quadric(specialize(p, ss.points[0]));
  const Rank4Quadric q1 = rank4_quadric(specialize(p, ss.points[1]));
  const TangentDatum td0 = tangent_form(q0, promote(vec5(1, 0, 0, -1, 1)));
  const TangentDatum td1 = tangent_form(q1, promote(vec5(0, 1, 0, 1, 0)));
  CHECK(nf_vec_eq(td0.form, promote(vec5(0, 0, 0, 1, 1))));
  CHECK(nf_vec_eq(td1.form, promote(vec5(0, 0, 0, 0, 1))));

  const Fibration fib = vertical_fibration(ss, {td0, td1});
  CHECK(fib.kind == FibrationKind::kRatio);
  CHECK(vec_eq(fib.l0, vec5(0, 0, 0, 1, 1)));
  CHECK(vec_eq(fib.l1, vec5(0, 0, 0, 0, 1)));
  // span{l0, l1} = span{x3, x4}.
  MatX rows(4, 5);
  for (int c = 0; c < 5; ++c) {
    rows(0, c) = fib.l0(c);
    rows(1, c) = fib.l1(c);
    rows(2, c) = Rat(c == 3 ? 1 : 0);
    rows(3, c) = Rat(c == 4 ? 1 : 0);
  }
  CHECK(exact_rank(rows) == 2);

  const CyclicAlgebraRep alg = build_algebra(ss, {td0, td1});
  CHECK(alg.eps.value == Int(5));
  CHECK(alg.denominator_exponent == 1);
  REQUIRE(alg.numerators.size() == 1);
  CHECK(alg.numerators[0].field == nullptr);
  CHECK(nf_vec_eq(alg.numerators[0].form, promote(vec5(0, 0, 0, 1, 1))));
  CHECK(vec_eq(alg.denominator, vec5(0, 0, 0, 0, 1)));
}

TEST_CASE("vertical_fibration splits the worked-example tangent form") {
  const Pencil p = worked_example();
  const DegeneracyScheme ds = degeneracy_scheme(char_form(p));
  const std::vector<NfElem> eps = eps_for_scheme(p, ds);
  const StarScheme ss = enumerate_star(ds, eps).at(0);
  const FieldPtr fld = ss.points[0].field;

  // Tangency point (3 : theta : 3 : 0 : 0) off the surface, theta = sqrt(12);
  // its polar form is the tangent form 2x0 - theta x1 + 2x2 + (theta - 1) x3.
  const Rank4Quadric q = rank4_quadric(specialize(p, ss.points[0]));
  NfVec5 pt;
  pt(0) = NfElem(fld, Rat(3));
  pt(1) = NfElem::generator(fld);
  pt(2) = NfElem(fld, Rat(3));
  const TangentDatum td = tangent_form(q, pt);
  NfVec5 expected;
  expected(0) = NfElem(fld, {Rat(2), Rat(0)});
  expected(1) = NfElem(fld, {Rat(0), Rat(-1)});
  expected(2) = NfElem(fld, {Rat(2), Rat(0)});
  expected(3) = NfElem(fld, {Rat(-1), Rat(1)});
  expected(4) = NfElem(fld, Rat(0));
  CHECK(nf_vec_eq(td.form, expected));

  const Fibration fib = vertical_fibration(ss, {td});
  CHECK(fib.kind == FibrationKind::kNorm);
  CHECK(vec_eq(fib.l0, vec5(2, 0, 2, -1, 0)));
  CHECK(vec_eq(fib.l1, vec5(0, 1, 0, -1, 0)));
  CHECK(fib.disc == Rat(12));

  // Norm identity: Norm(l_T(v)) = l0(v)^2 - 12 l1(v)^2 at sample vectors.
  const std::array<Vec5, 3> samples = {vec5(1, 2, 3, 4, 5), vec5(1, 0, 0, 1, 1),
                                       vec5(2, -1, 0, 3, 1)};
  for (const Vec5& v : samples) {
    NfElem lv;
    Rat v0(0), v1(0);
    for (int i = 0; i < 5; ++i) {
      lv += td.form(i) * NfElem(v(i));
      v0 += fib.l0(i) * v(i);
      v1 += fib.l1(i) * v(i);
    }
    Rat rhs = v0 * v0 - Rat(12) * v1 * v1;
    rhs.canonicalize();
    CHECK(nf_norm(lv) == rhs);
  }

  const CyclicAlgebraRep alg = build_algebra(ss, {td});
  CHECK(alg.eps.value == Int(-5));
  CHECK(alg.denominator_exponent == 2);
  REQUIRE(alg.numerators.size() == 1);
  CHECK(alg.numerators[0].field == fld);
  CHECK(vec_eq(alg.denominator, vec5(1, 0, 0, 0, 0)));
}

TEST_CASE("vertical_fibration rejects degenerate tangent data") {
  const Pencil p = bsd_surface();
  const DegeneracyScheme ds = degeneracy_scheme(char_form(p));
  const std::vector<NfElem> eps = eps_for_scheme(p, ds);
  const StarScheme ss = enumerate_star(ds, eps).at(0);

  // Missing data.
  CHECK_THROWS_AS(vertical_fibration(ss, {}), std::invalid_argument);

  // Dependent rational forms.
  TangentDatum a, b;
  a.form = promote(vec5(0, 0, 0, 1, 0));
  b.form = promote(vec5(0, 0, 0, 2, 0));
  CHECK_THROWS_AS(vertical_fibration(ss, {a, b}), std::invalid_argument);

  // Degree-2 scheme with a rational (hence unsplittable) tangent form.
  const Pencil we = worked_example();
  const DegeneracyScheme wds = degeneracy_scheme(char_form(we));
  const StarScheme wss = enumerate_star(wds, eps_for_scheme(we, wds)).at(0);
  TangentDatum rat_form;
  rat_form.form = NfVec5();
  for (int i = 0; i < 5; ++i) rat_form.form(i) = NfElem(wss.points[0].field, Rat(i == 0));
  CHECK_THROWS_AS(vertical_fibration(wss, {rat_form}), std::invalid_argument);

  // Pure square-root multiple: theta-part only.
  TangentDatum pure;
  pure.form = NfVec5();
  pure.form(0) = NfElem(wss.points[0].field, {Rat(0), Rat(1)});  // theta
  CHECK_THROWS_AS(vertical_fibration(wss, {pure}), std::invalid_argument);
}

TEST_CASE("brauer_group reproduces the worked example verbatim") {
  const Pencil p = worked_example();
  const BrauerReport rep = brauer_group(p);
  CHECK(rep.order == 2);
  CHECK(rep.generators_available);
  CHECK(rep.hypothesis_flags.empty());
  REQUIRE(rep.certificates.size() == 1);
  CHECK(rep.certificates[0].points.size() == 1);
  CHECK(rep.certificates[0].points[0].degree == 2);
  CHECK(rep.certificates[0].rational_eps.value == Int(-5));
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->degree == 3);
  REQUIRE(rep.witness_eps.has_value());
  CHECK(!nf_is_square(*rep.witness_eps));

  REQUIRE(rep.generators.size() == 1);
  const CyclicAlgebraRep& alg = rep.generators[0];
  CHECK(alg.eps.value == Int(-5));
  CHECK(alg.denominator_exponent == 2);
  CHECK(vec_eq(alg.denominator, vec5(1, 0, 0, 0, 0)));
  REQUIRE(alg.numerators.size() == 2);
  const FieldPtr fld = rep.certificates[0].points[0].field;
  NfVec5 expected;
  expected(0) = NfElem(fld, {Rat(2), Rat(0)});
  expected(1) = NfElem(fld, {Rat(0), Rat(-1)});
  expected(2) = NfElem(fld, {Rat(2), Rat(0)});
  expected(3) = NfElem(fld, {Rat(-1), Rat(1)});
  expected(4) = NfElem(fld, Rat(0));
  CHECK(nf_vec_eq(alg.numerators[0].form, expected));
  // The companion form lives over the same field and is not a scalar
  // multiple of the primary form (it cuts the other tangent sheet).
  CHECK(alg.numerators[1].field == fld);
  bool companion_zero = true;
  for (int i = 0; i < 5; ++i) {
    if (!alg.numerators[1].form(i).is_zero()) companion_zero = false;
  }
  CHECK(!companion_zero);
  {
    // Not proportional: cross-ratios of coordinates must differ somewhere.
    const NfVec5& a = alg.numerators[0].form;
    const NfVec5& b = alg.numerators[1].form;
    bool proportional = true;
    for (int i = 0; i < 5 && proportional; ++i) {
      for (int j = i + 1; j < 5 && proportional; ++j) {
        if (!(a(i) * b(j) - a(j) * b(i)).is_zero()) proportional = false;
      }
    }
    CHECK(!proportional);
  }

  REQUIRE(rep.fibrations.size() == 1);
  const Fibration& fib = rep.fibrations[0];
  CHECK(fib.kind == FibrationKind::kNorm);
  CHECK(vec_eq(fib.l0, vec5(2, 0, 2, -1, 0)));
  CHECK(vec_eq(fib.l1, vec5(0, 1, 0, -1, 0)));
  CHECK(fib.disc == Rat(12));
  CHECK(fib.whole_group_vertical);
  CHECK(fib.source.indices == std::vector<int>{0});
}

TEST_CASE("brauer_group on the BSD surface: order 2 with an [x3:x4] fibration") {
  const Pencil p = bsd_surface();
  const BrauerReport rep = brauer_group(p);
  CHECK(rep.order == 2);
  CHECK(rep.generators_available);
  REQUIRE(rep.certificates.size() == 1);
  REQUIRE(rep.certificates[0].points.size() == 2);
  CHECK(rep.certificates[0].points[0].coord.rational_value() == Rat(0));
  CHECK(rep.certificates[0].points[1].at_infinity);
  CHECK(rep.certificates[0].rational_eps.value == Int(5));
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->coord.rational_value() == Rat(-1));
  CHECK(rational_square_class(nf_norm(*rep.witness_eps)).value == Int(-1));

  REQUIRE(rep.generators.size() == 1);
  CHECK(rep.generators[0].eps.value == Int(5));
  CHECK(rep.generators[0].denominator_exponent == 1);
  CHECK(nf_vec_eq(rep.generators[0].numerators[0].form, promote(vec5(0, 0, 0, 1, 1))));
  CHECK(vec_eq(rep.generators[0].denominator, vec5(0, 0, 0, 1, 0)));

  REQUIRE(rep.fibrations.size() == 1);
  const Fibration& fib = rep.fibrations[0];
  CHECK(fib.kind == FibrationKind::kRatio);
  CHECK(fib.whole_group_vertical);
  MatX rows(4, 5);
  for (int c = 0; c < 5; ++c) {
    rows(0, c) = fib.l0(c);
    rows(1, c) = fib.l1(c);
    rows(2, c) = Rat(c == 3 ? 1 : 0);
    rows(3, c) = Rat(c == 4 ? 1 : 0);
  }
  CHECK(exact_rank(rows) == 2);  // forms span {x3, x4}
}

TEST_CASE("brauer_group detects order 4 on a planted split pencil") {
  const Pencil p = planted_order4();
  REQUIRE(smoothness_check(p).smooth);
  const BrauerReport rep = brauer_group(p);
  CHECK(rep.order == 4);
  CHECK(rep.generators_available);
  REQUIRE(rep.certificates.size() == 3);
  REQUIRE(rep.generators.size() == 3);
  REQUIRE(rep.fibrations.size() == 3);

  // The triple is the three eps-class -5 points t in {4, -1, -3}.
  std::set<Rat> coords;
  for (const StarScheme& ss : rep.certificates) {
    CHECK(ss.points.size() == 2);
    CHECK(ss.rational_eps.value == Int(-5));
    CHECK(ss.norm_product_class.is_trivial());
    for (const ClosedPoint& pt : ss.points) coords.insert(pt.coord.rational_value());
  }
  CHECK(coords == std::set<Rat>({Rat(4), Rat(-1), Rat(-3)}));

  for (const CyclicAlgebraRep& g : rep.generators) {
    CHECK(g.eps.value == Int(-5));
    CHECK(g.denominator_exponent == 1);
    CHECK(g.numerators.size() == 1);
  }
  // Shared tangent forms: pairs are {T0,T1}, {T0,T2}, {T2,T1}.
  CHECK(vec_eq(rep.fibrations[0].l0, rep.fibrations[1].l0));
  CHECK(vec_eq(rep.fibrations[1].l1, rep.fibrations[2].l0));
  CHECK(vec_eq(rep.fibrations[2].l1, rep.fibrations[0].l1));
  // Generators reuse the fibration forms: numerator = l0, denominator = l1.
  for (int i = 0; i < 3; ++i) {
    CHECK(nf_vec_eq(rep.generators[i].numerators[0].form, promote(rep.fibrations[i].l0)));
    CHECK(vec_eq(rep.generators[i].denominator, rep.fibrations[i].l1));
  }
}

TEST_CASE("brauer_group returns order 1 for large residue fields") {
  CHECK(brauer_group(degree5_pencil()).order == 1);
  const BrauerReport rep = brauer_group(quartic_point_pencil());
  CHECK(rep.order == 1);
  CHECK(rep.generators.empty());
  CHECK(rep.fibrations.empty());
  CHECK(rep.certificates.empty());
  CHECK(!rep.witness.has_value());
}

TEST_CASE("brauer_group rejects singular surfaces") {
  Mat5 eye = Mat5::Zero();
  for (int i = 0; i < 5; ++i) eye(i, i) = Rat(2);
  const Pencil singular{SymMat5(eye), SymMat5(eye)};
  CHECK_THROWS_AS(brauer_group(singular), std::domain_error);
}

TEST_CASE("order4_projection from the planted rational point") {
  const Pencil p = planted_order4();
  const Vec5 pt = vec5(1, 1, 1, 1, 1);
  const DegeneracyScheme ds = degeneracy_scheme(char_form(p));

  // Tangent data at the common point on the three class -5 members.
  std::vector<TangentDatum> tds;
  for (const Rat& t : {Rat(4), Rat(-1), Rat(-3)}) {
    const ClosedPoint* match = nullptr;
    for (const ClosedPoint& cp : ds.points)
      if (cp.coord.rational_value() == t) match = &cp;
    REQUIRE(match != nullptr);
    tds.push_back(tangent_form(rank4_quadric(specialize(p, *match)), promote(pt)));
  }
  CHECK(nf_vec_eq(tds[0].form, promote(vec5(0, 5, 7, 16, -28))));
  CHECK(nf_vec_eq(tds[1].form, promote(vec5(5, 0, -2, -1, -2))));
  CHECK(nf_vec_eq(tds[2].form, promote(vec5(7, 2, 0, 5, -14))));

  const Fibration fib = order4_projection(p, pt, tds);
  CHECK(fib.whole_group_vertical);
  CHECK(vec_eq(fib.l0, vec5(0, 5, 7, 16, -28)));
  CHECK(vec_eq(fib.l1, vec5(5, 0, -2, -1, -2)));

  // A point off the surface is rejected.
  CHECK_THROWS_AS(order4_projection(p, vec5(1, 1, 1, 1, 2), tds),
                  std::invalid_argument);
  // Tangent data at a different point are rejected.
  std::vector<TangentDatum> moved = tds;
  moved[0].point = promote(vec5(1, 0, 0, 0, 0));
  CHECK_THROWS_AS(order4_projection(p, pt, moved), std::invalid_argument);
  // Crafted dependent tangent forms are a degenerate tangency.
  std::vector<TangentDatum> degen = tds;
  degen[1].form = degen[0].form;
  CHECK_THROWS_AS(order4_projection(p, pt, degen), std::domain_error);
}

TEST_CASE("fiber_scan pins the BSD bad set and a smooth diagonal fiber") {
  const Pencil p = bsd_surface();
  Fibration classical;
  classical.l0 = vec5(0, 0, 0, 1, 0);
  classical.l1 = vec5(0, 0, 0, 0, 1);
  std::vector<Rat> samples;
  for (long t = -6; t <= 6; ++t) samples.emplace_back(t);
  samples.emplace_back(Rat(1, 2));
  const auto diags = fiber_scan(p, classical, samples);
  REQUIRE(diags.size() == samples.size());
  std::set<Rat> bad;
  for (const FiberDiagnostic& d : diags)
    if (!d.smooth) bad.insert(d.t);
  CHECK(bad == std::set<Rat>({Rat(-2), Rat(-1), Rat(0)}));
  // Fiber at t = 0 (hyperplane x3 = 0): restricted characteristic quartic
  // -800 lam mu^2 (lam + mu), a repeated factor.
  const FiberDiagnostic& at0 = diags[6];
  REQUIRE(at0.t == Rat(0));
  CHECK(at0.quartic == std::array<Rat, 5>{Rat(0), Rat(0), Rat(-800), Rat(-800), Rat(0)});

  // Generic fiber on a split diagonal surface is smooth...
  const Pencil diag = diagonal_pencil();
  Fibration split01;
  split01.l0 = vec5(1, 0, 0, 0, 0);
  split01.l1 = vec5(0, 1, 0, 0, 0);
  CHECK(fiber_scan(diag, split01, {Rat(1)}).at(0).smooth);
  // ...while the (x0, x2) direction at t = 1 gives a repeated root.
  Fibration split02;
  split02.l0 = vec5(1, 0, 0, 0, 0);
  split02.l1 = vec5(0, 0, 1, 0, 0);
  CHECK(!fiber_scan(diag, split02, {Rat(1)}).at(0).smooth);

  // Dependent forms are rejected at the sample where they cancel.
  Fibration degen;
  degen.l0 = vec5(0, 0, 0, 1, 0);
  degen.l1 = vec5(0, 0, 0, 1, 0);
  CHECK_THROWS_AS(fiber_scan(p, degen, {Rat(1)}), std::invalid_argument);
}

TEST_CASE("worked-example fibration fibers are all singular at a fixed point") {
  // The surface contains (1 : 0 : -1 : 0 : 0), and its tangent plane there
  // is exactly the base plane V(l0, l1) of the fibration: every hyperplane
  // through that plane meets the surface in a curve singular at the point,
  // so no fiber of this fibration is smooth. (The classical bound of two
  // concerns geometrically reducible fibers, which the scan does not
  // decide.)
  const Pencil p = worked_example();
  const BrauerReport rep = brauer_group(p);
  REQUIRE(rep.fibrations.size() == 1);
  const Fibration& fib = rep.fibrations[0];
  // The special point is on the surface and on the base plane.
  const NfVec5 special = promote(vec5(1, 0, -1, 0, 0));
  Rat l0v(0), l1v(0);
  for (int i = 0; i < 5; ++i) {
    l0v += fib.l0(i) * vec5(1, 0, -1, 0, 0)(i);
    l1v += fib.l1(i) * vec5(1, 0, -1, 0, 0)(i);
  }
  CHECK(l0v == 0);
  CHECK(l1v == 0);
  std::vector<Rat> samples{Rat(0), Rat(1), Rat(2), Rat(-1), Rat(5), Rat(1, 2)};
  for (const FiberDiagnostic& d : fiber_scan(p, fib, samples)) CHECK(!d.smooth);
}

TEST_CASE("brauer_group order is invariant under coordinate and pencil changes") {
  const Pencil p = worked_example();
  std::mt19937_64 rng(42);
  auto random_gl5 = [&]() {
    while (true) {
      Mat5 u;
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
          u(i, j) = Rat(static_cast<long>(rng() % 7) - 3);
      if (exact_det(u) != 0) return u;
    }
  };
  for (int trial = 0; trial < 4; ++trial) {
    const Mat5 u = random_gl5();
    Mat5 a = u.transpose() * p.m.mat() * u;
    Mat5 b = u.transpose() * p.m_tilde.mat() * u;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        a(i, j).canonicalize();
        b(i, j).canonicalize();
      }
    const BrauerReport rep = brauer_group({SymMat5(a), SymMat5(b)});
    CHECK(rep.order == 2);
    REQUIRE(rep.certificates.size() == 1);
    // The rational representative is well defined only modulo norms from
    // the residue field Q(sqrt(3)): -5 and -15 = -5 * 3 are the same class.
    const Int v = rep.certificates[0].rational_eps.value;
    CHECK((v == Int(-5) || v == Int(-15)));
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->degree == 3);
  }
  // Pencil-basis changes move the degeneracy points but not the answer.
  const long moves[2][4] = {{1, 1, 0, 1}, {2, 1, 1, 1}};
  for (const auto& mv : moves) {
    Mat5 a = Rat(mv[0]) * p.m.mat() + Rat(mv[1]) * p.m_tilde.mat();
    Mat5 b = Rat(mv[2]) * p.m.mat() + Rat(mv[3]) * p.m_tilde.mat();
    const BrauerReport rep = brauer_group({SymMat5(a), SymMat5(b)});
    CHECK(rep.order == 2);
    const Int v = rep.certificates.at(0).rational_eps.value;
    CHECK((v == Int(-5) || v == Int(-15)));
  }
}
