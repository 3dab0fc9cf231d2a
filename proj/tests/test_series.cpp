// Copyright 2026 The kmm-bkp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <random>

#include "kmm/schurq.hpp"
#include "kmm/series.hpp"
#include "oracles.hpp"

using namespace kmm;

namespace {

Multidegree t(int index, int exponent = 1) { return Multidegree::variable(Alphabet::t, index, exponent); }
Multidegree s(int index, int exponent = 1) { return Multidegree::variable(Alphabet::s, index, exponent); }

Series random_series(std::mt19937_64& rng, int truncation, bool odd_only) {
  Series out(truncation);
  const int vars[] = {1, 3, 5};
  for (int k = 0; k < 5; ++k) {
    Multidegree m;
    for (int v : vars) {
      if (rng() % 2) m = m * t(v, static_cast<int>(rng() % 2) + 1);
    }
    if (odd_only && (m.is_one() || m.weight() % 2 == 0)) continue;
    if (m.weight() <= truncation) out.add_term(m, oracle::random_signed(rng, 9));
  }
  return out;
}

}  // namespace

TEST_CASE("make_series builds, merges and rejects") {
  CHECK(make_series({}, 8).is_zero());
  Series a = make_series({{t(1), 2}}, 8);
  CHECK(coeff(a, t(1)) == 2);
  CHECK(a.terms().size() == 1);
  CHECK(make_series({{t(1), 1}, {t(1), -1}}, 8).is_zero());
  CHECK_THROWS_AS(make_series({{t(5, 2), 1}}, 8), DomainError);
  try {
    make_series({{t(3, 3), 1}}, 8);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("t_3^3") != std::string::npos);
  }
}

TEST_CASE("monomials validate their indices") {
  CHECK_THROWS_AS(t(2), DomainError);
  CHECK_THROWS_AS(t(-1), DomainError);
  CHECK((t(1) * s(1)).weight() == 2);
  CHECK((t(3, 2) * s(1)).weight(Alphabet::t) == 6);
}

TEST_CASE("multiplication") {
  Series two_t1 = make_series({{t(1), 2}}, 8);
  Series p = mul(two_t1, two_t1);
  CHECK(p == make_series({{t(1, 2), 4}}, 8));
  CHECK(mul(two_t1, Series(8)).is_zero());
  Series a = make_series({{{}, 1}, {t(3), 1}}, 6);
  Series b = make_series({{{}, 1}, {t(3), -1}}, 6);
  CHECK(mul(a, b) == make_series({{{}, 1}, {t(3, 2), -1}}, 6));
}

TEST_CASE("exponential") {
  CHECK(exp_truncated(Series(5)) == Series::constant(1, 5));
  Series e = exp_truncated(make_series({{t(1), 2}}, 2));
  CHECK(e == make_series({{{}, 1}, {t(1), 2}, {t(1, 2), 2}}, 2));
  Series f = exp_truncated(make_series({{t(1), 2}, {t(3), 2}}, 3));
  CHECK(grade(f, 3) == make_series({{t(3), 2}, {t(1, 3), Rational(4, 3)}}, 3));
  CHECK(coeff(f, t(1, 3)) == Rational(4, 3));
  CHECK_THROWS_AS(exp_truncated(Series::constant(1, 4)), DomainError);
}

TEST_CASE("coefficients and grading") {
  Series a = make_series({{{}, 1}, {t(1), 2}}, 8);
  CHECK(coeff(a, t(1)) == 2);
  CHECK(coeff(a, t(3)) == 0);
  CHECK_THROWS_AS(coeff(a, t(3, 3)), DomainError);
  CHECK(grade(a, 0) == Series::constant(1, 8));
  CHECK(grade(a, 1) == make_series({{t(1), 2}}, 8));
  CHECK(grade(exp_truncated(make_series({{t(1), 2}}, 4)), 2) == make_series({{t(1, 2), 2}}, 4));
}

TEST_CASE("canonical printing is graded lexicographic, largest first") {
  Series a = make_series({{t(1, 6), 1}, {t(5) * t(1), 45}, {t(3, 2), -45}, {t(3) * t(1, 3), -15}}, 6);
  CHECK(a.to_string() == "45 t_5 t_1 - 45 t_3^2 - 15 t_3 t_1^3 + t_1^6");
}

TEST_CASE("property: homogeneous parts sum back to the series") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    Series a = random_series(rng, 8, false);
    Series sum(8);
    for (int w = 0; w <= 8; ++w) sum += grade(a, w);
    CHECK(sum == a);
  }
}

TEST_CASE("property: ring laws at fixed truncation") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    Series a = random_series(rng, 9, false);
    Series b = random_series(rng, 9, false);
    Series c = random_series(rng, 9, false);
    CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
    CHECK(mul(a, b) == mul(b, a));
    CHECK(mul(a, b + c) == mul(a, b) + mul(a, c));
  }
}

TEST_CASE("property: exp(a) exp(-a) = 1") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    Series a = random_series(rng, 10, true);
    CHECK(mul(exp_truncated(a), exp_truncated(-a)) == Series::constant(1, 10));
  }
}
