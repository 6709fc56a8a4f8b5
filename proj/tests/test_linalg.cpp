// Copyright 2026 The dp4 Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dp4/linalg.hpp"

using namespace dp4;

TEST_CASE("rational matrices through Eigen expressions") {
  Mat5 a = Mat5::Zero();
  for (int i = 0; i < 5; ++i) a(i, i) = Rat(i + 1);
  a(0, 4) = Rat(1, 2);
  a(4, 0) = Rat(1, 2);
  Mat5 b = a.transpose();
  CHECK(b(0, 4) == Rat(1, 2));
  Mat5 c = a * a;
  CHECK(c(0, 0) == Rat(1) * Rat(1) + Rat(1, 2) * Rat(1, 2));
  Vec5 v;
  v << Rat(1), Rat(0), Rat(0), Rat(0), Rat(2);
  Vec5 av = a * v;
  CHECK(av(0) == Rat(2));
  CHECK(av(4) == Rat(1, 2) + Rat(10));
  CHECK((a - a).isZero(Rat(0)));
}

TEST_CASE("exact rank") {
  MatX m(3, 4);
  m << Rat(1), Rat(2), Rat(3), Rat(4),
       Rat(2), Rat(4), Rat(6), Rat(8),
       Rat(0), Rat(1), Rat(0), Rat(1);
  CHECK(exact_rank(m) == 2);
  CHECK(exact_rank(Mat5::Identity()) == 5);
  CHECK(exact_rank(Mat5::Zero()) == 0);
}

TEST_CASE("exact determinant") {
  MatX m(3, 3);
  m << Rat(2), Rat(0), Rat(1),
       Rat(1), Rat(3), Rat(2),
       Rat(0), Rat(1), Rat(0);
  // det = 2*(0-2) - 0 + 1*(1-0) = -3
  CHECK(exact_det(m) == Rat(-3));
  CHECK(exact_det(Mat5::Identity()) == Rat(1));
  MatX sing(2, 2);
  sing << Rat(1), Rat(2), Rat(2), Rat(4);
  CHECK(exact_det(sing) == Rat(0));
}

TEST_CASE("kernel vectors annihilate") {
  MatX m(3, 4);
  m << Rat(1), Rat(2), Rat(3), Rat(4),
       Rat(2), Rat(4), Rat(6), Rat(8),
       Rat(0), Rat(1), Rat(0), Rat(1);
  auto kernel = exact_kernel(m);
  REQUIRE(kernel.size() == 2);  // rank 2, 4 columns
  for (const auto& v : kernel) {
    VecX mv = m * v;
    for (int i = 0; i < mv.size(); ++i) CHECK(mv(i) == Rat(0));
  }
  CHECK(exact_kernel(Mat5::Identity()).empty());
}

TEST_CASE("solve") {
  MatX m(2, 2);
  m << Rat(2), Rat(1), Rat(1), Rat(3);
  VecX b(2);
  b << Rat(5), Rat(10);
  auto x = exact_solve(m, b);
  REQUIRE(x.has_value());
  VecX r = m * (*x);
  CHECK(r(0) == Rat(5));
  CHECK(r(1) == Rat(10));
  // inconsistent system
  MatX s(2, 2);
  s << Rat(1), Rat(1), Rat(1), Rat(1);
  VecX c(2);
  c << Rat(1), Rat(2);
  CHECK(!exact_solve(s, c).has_value());
}

TEST_CASE("congruence and determinant multiplicativity") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> coeff(-3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    Mat5 a, p;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        a(i, j) = Rat(coeff(rng));
        p(i, j) = Rat(coeff(rng));
      }
    a = (a + Mat5(a.transpose())).eval();  // symmetrize
    Mat5 c = congruence(a, p);
    CHECK(exact_det(c) == exact_det(a) * exact_det(p) * exact_det(p));
    CHECK(c == Mat5(c.transpose()));
  }
}

TEST_CASE("number field scalars in matrices") {
  FieldPtr f = NumberField::create(UniPoly(std::vector<Rat>{Rat(-3), Rat(0), Rat(1)}));
  NfElem th = NfElem::generator(f);
  NfMatX m(2, 2);
  m(0, 0) = th;
  m(0, 1) = NfElem(Rat(3));
  m(1, 0) = NfElem(Rat(1));
  m(1, 1) = th;
  // det = θ² - 3 = 0 in this field
  CHECK(exact_det(m) == NfElem(Rat(0)));
  CHECK(exact_rank(m) == 1);
  auto kernel = exact_kernel(m);
  REQUIRE(kernel.size() == 1);
  NfVecX mv = m * kernel[0];
  CHECK(mv(0).is_zero());
  CHECK(mv(1).is_zero());

  // product through Eigen with field scalars
  NfMatX sq = m * m;
  CHECK(sq(0, 0) == th * th + NfElem(Rat(3)));  // θ²+3 = 6
  CHECK(sq(0, 0) == NfElem(Rat(6)));

  NfMatX c = congruence(m, m);
  CHECK(exact_det(c) == NfElem(Rat(0)));
}
