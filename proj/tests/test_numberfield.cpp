// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dp4/numberfield.hpp"

using namespace dp4;

namespace {

UniPoly P(std::vector<long> asc) {
  std::vector<Rat> c;
  for (long v : asc) c.emplace_back(v);
  return UniPoly(std::move(c));
}

FieldPtr sqrt3_field() { return NumberField::create(P({-3, 0, 1})); }
FieldPtr cbrt2_field() { return NumberField::create(P({-2, 0, 0, 1})); }
FieldPtr cubic_field() { return NumberField::create(P({4, -7, -2, 1})); }

NfElem random_elem(const FieldPtr& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 3);
  std::vector<Rat> c(f->degree());
  for (auto& v : c) v = Rat(num(rng), den(rng));
  return NfElem(f, std::move(c));
}

}  // namespace

TEST_CASE("field construction validates the presentation") {
  CHECK(sqrt3_field()->degree() == 2);
  CHECK(NumberField::rationals()->degree() == 1);
  CHECK_THROWS(NumberField::create(P({-1, 0, 1})));        // reducible
  CHECK_THROWS(NumberField::create(P({-3, 0, 2})));        // not monic
  CHECK_THROWS(NumberField::create(UniPoly(std::vector<Rat>{Rat(1, 2), Rat(1)})));  // not integral
  CHECK_THROWS(NumberField::create(P({1, 0, 0, 0, 0, 0, 1})));  // degree 6
}

TEST_CASE("adjoin_root rescales to an integral presentation") {
  // y² + 9/4 becomes y² + 9 with root θ/2
  UniPoly p(std::vector<Rat>{Rat(9, 4), Rat(0), Rat(1)});
  auto [f, root] = NumberField::adjoin_root(p);
  CHECK(f->min_poly() == P({9, 0, 1}));
  CHECK(root * root == NfElem(f, Rat(-9, 4)));

  auto [f2, root2] = NumberField::adjoin_root(UniPoly(std::vector<Rat>{Rat(-1, 2), Rat(0), Rat(1)}));
  CHECK(f2->min_poly() == P({-2, 0, 1}));
  CHECK(root2 * root2 == NfElem(f2, Rat(1, 2)));

  // already integral: unchanged
  auto [f3, root3] = NumberField::adjoin_root(P({-3, 0, 1}));
  CHECK(f3->min_poly() == P({-3, 0, 1}));
  CHECK(root3 * root3 == NfElem(f3, Rat(3)));

  // linear: the root is the rational itself
  auto [f4, root4] = NumberField::adjoin_root(UniPoly(std::vector<Rat>{Rat(-5, 3), Rat(1)}));
  CHECK(root4.is_rational());
  CHECK(root4.rational_value() == Rat(5, 3));

  CHECK_THROWS(NumberField::adjoin_root(UniPoly(std::vector<Rat>{Rat(-9, 4), Rat(0), Rat(1)})));  // reducible
}

TEST_CASE("element arithmetic") {
  FieldPtr f = sqrt3_field();
  NfElem th = NfElem::generator(f);
  CHECK(th * th == NfElem(f, Rat(3)));
  NfElem x = Rat(120) * th - NfElem(Rat(240));
  CHECK(x.coord(0) == -240);
  CHECK(x.coord(1) == 120);
  CHECK((x - x).is_zero());
  CHECK(x + x == Rat(2) * x);
  CHECK(x * x.inverse() == NfElem(Rat(1)));
  CHECK(x.pow(3) == x * x * x);
  CHECK(x.pow(-2) == (x * x).inverse());

  // rationals coerce into any field they meet
  CHECK(NfElem(Rat(5)) * th == NfElem(f, std::vector<Rat>{Rat(0), Rat(5)}));

  // cube root field: θ³ = 2, θ⁻¹ = θ²/2
  FieldPtr g = cbrt2_field();
  NfElem u = NfElem::generator(g);
  CHECK(u.pow(3) == NfElem(Rat(2)));
  CHECK(u.inverse() == u * u / NfElem(Rat(2)));

  // elements of structurally different fields do not mix
  CHECK_THROWS(th + u);
}

TEST_CASE("norm and trace match pinned values") {
  FieldPtr f = sqrt3_field();
  NfElem th = NfElem::generator(f);
  NfElem x = Rat(120) * th - NfElem(Rat(240));
  CHECK(nf_norm(x) == Rat(14400));
  CHECK(nf_trace(x) == Rat(-480));
  CHECK(nf_norm(NfElem(f, Rat(1))) == 1);
  CHECK(nf_norm(NfElem(f, Rat(0))) == 0);
  CHECK(nf_norm(NfElem(f, Rat(7))) == 49);   // rational scales by field degree power
  CHECK(nf_trace(NfElem(f, Rat(7))) == 14);
  CHECK(nf_charpoly(x) == P({14400, 480, 1}));
  CHECK(nf_charpoly(th) == P({-3, 0, 1}));
}

TEST_CASE("norm is multiplicative") {
  std::mt19937_64 rng(5);
  FieldPtr g = cbrt2_field();
  for (int i = 0; i < 100; ++i) {
    NfElem x = random_elem(g, rng);
    CHECK(nf_norm(x * x) == nf_norm(x) * nf_norm(x));
    NfElem y = random_elem(g, rng);
    CHECK(nf_norm(x * y) == nf_norm(x) * nf_norm(y));
  }
}

TEST_CASE("square detection on pinned elements") {
  FieldPtr f = sqrt3_field();
  NfElem th = NfElem::generator(f);
  NfElem x = Rat(120) * th - NfElem(Rat(240));
  CHECK(!nf_is_square(x));
  CHECK(nf_is_square(Rat(-5) * x));  // -5x = (10θ - 30)²
  CHECK(nf_is_square(NfElem(Rat(4))));
  CHECK(!nf_is_square(NfElem(Rat(5))));
  CHECK(nf_is_square(NfElem(f, Rat(3))));   // 3 = θ² is a square up in the field
  CHECK(nf_is_square(NfElem(f, Rat(0))));

  auto y = nf_sqrt(Rat(-5) * x);
  REQUIRE(y.has_value());
  CHECK((*y) * (*y) == Rat(-5) * x);
  CHECK(!nf_sqrt(x).has_value());
  auto r3 = nf_sqrt(NfElem(f, Rat(3)));
  REQUIRE(r3.has_value());
  CHECK((*r3) * (*r3) == NfElem(f, Rat(3)));
}

TEST_CASE("squares of random elements are squares") {
  std::mt19937_64 rng(17);
  for (FieldPtr f : {sqrt3_field(), cbrt2_field(), cubic_field()}) {
    for (int i = 0; i < 100; ++i) {
      NfElem x = random_elem(f, rng);
      if (x.is_zero()) continue;
      NfElem sq = x * x;
      CHECK(nf_is_square(sq));
      auto root = nf_sqrt(sq);
      REQUIRE(root.has_value());
      CHECK((*root) * (*root) == sq);
    }
  }
}

TEST_CASE("square class is multiplicative") {
  FieldPtr f = sqrt3_field();
  NfElem th = NfElem::generator(f);
  NfElem nonsq = Rat(120) * th - NfElem(Rat(240));
  NfElem sq = (th + NfElem(Rat(2))) * (th + NfElem(Rat(2)));
  CHECK(nf_is_square(sq));
  CHECK(!nf_is_square(nonsq * sq));        // nonsquare · square stays nonsquare
  CHECK(nf_is_square(nonsq * nonsq));      // nonsquare · itself is a square
  NfElem other = Rat(-5) * nonsq;          // square
  CHECK(nf_is_square(other * sq));         // square · square is a square
}

TEST_CASE("rational representatives in quadratic fields") {
  FieldPtr f = sqrt3_field();
  NfElem th = NfElem::generator(f);
  NfElem x = Rat(120) * th - NfElem(Rat(240));
  auto rep = rational_representative(x);
  REQUIRE(rep.has_value());
  CHECK(rep->value == -5);
  CHECK(nf_is_square(NfElem(Rat(rep->value)) * x));  // mandatory property

  // trace 0, norm 9/4: candidates ±3
  auto [g, root] = NumberField::adjoin_root(UniPoly(std::vector<Rat>{Rat(9, 4), Rat(0), Rat(1)}));
  auto rep2 = rational_representative(root);
  REQUIRE(rep2.has_value());
  CHECK((rep2->value == 3 || rep2->value == -3));
  CHECK(nf_is_square(NfElem(Rat(rep2->value)) * root));

  // a square gets representative 1
  auto rep3 = rational_representative(Rat(-5) * x);
  REQUIRE(rep3.has_value());
  CHECK(rep3->value == 1);

  // norm not a square: absent
  auto rep4 = rational_representative(th + NfElem(Rat(1)));  // norm = 1 - 3 = -2
  CHECK(!rep4.has_value());

  // degree 1 falls back to the rational square class
  auto rep5 = rational_representative(NfElem(Rat(-20)));
  REQUIRE(rep5.has_value());
  CHECK(rep5->value == -5);
}
