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

#include "kmm/schurq.hpp"

using namespace kmm;

namespace {

Multidegree t(int index, int exponent = 1) { return Multidegree::variable(Alphabet::t, index, exponent); }
Multidegree s(int index, int exponent = 1) { return Multidegree::variable(Alphabet::s, index, exponent); }

/// Replaces Tr(H^n) by n t_n.
Series substitute_traces(const TracePoly& p, int truncation) {
  Series out(truncation);
  for (const auto& [key, c] : p.terms()) {
    Multidegree m = key.second;
    Rational scale = c;
    for (int part : key.first.parts()) {
      m = m * t(part);
      scale *= part;
    }
    out.add_term(m, scale);
  }
  return out;
}

}  // namespace

TEST_CASE("odd partitions") {
  OddPartition p{1, 3, 1};
  CHECK(p.parts() == std::vector<int>{3, 1, 1});
  CHECK(p.weight() == 5);
  CHECK(p.label() == "3,1^2");
  CHECK(p.symbol() == "M_{3,1^2}");
  CHECK(OddPartition{}.symbol() == "1");
  CHECK_THROWS_AS(OddPartition({2, 1}), DomainError);
  CHECK_THROWS_AS(OddPartition({0}), DomainError);
  CHECK(OddPartition{3, 1} == OddPartition{1, 3});

  std::vector<std::string> labels;
  for (const auto& q : odd_partitions(6)) labels.push_back(q.label());
  CHECK(labels == std::vector<std::string>{"5,1", "3^2", "3,1^3", "1^6"});
  CHECK(odd_partitions(0).size() == 1);
  CHECK(odd_partitions(8).size() == 6);
  CHECK(even_length_partitions(8).size() == 6);
  CHECK(even_length_partitions(7).empty());
  CHECK(odd_partitions(10).size() == 10);
  CHECK(even_length_partitions(10).size() == 10);
}

TEST_CASE("q polynomials") {
  CHECK(q_poly(0) == Series::constant(1));
  CHECK(q_poly(2) == make_series({{t(1, 2), 2}}, kDefaultTruncation));
  CHECK(q_poly(3) == make_series({{t(3), 2}, {t(1, 3), Rational(4, 3)}}, kDefaultTruncation));
  CHECK(q_poly(-1).is_zero());
  CHECK(q_poly(2, 10, Alphabet::s) == make_series({{s(1, 2), 2}}, 10));
  for (int j = 0; j <= 10; ++j) CHECK(grade(q_poly(j), j) == q_poly(j));
}

TEST_CASE("q on traces") {
  CHECK(q_on_traces(0) == TracePoly::one());
  TracePoly q1;
  q1.add_term(OddPartition{1}, {}, 2);
  CHECK(q_on_traces(1) == q1);
  TracePoly q3;
  q3.add_term(OddPartition{3}, {}, Rational(2, 3));
  q3.add_term(OddPartition{1, 1, 1}, {}, Rational(4, 3));
  CHECK(q_on_traces(3) == q3);
  CHECK(q_on_traces(-2).is_zero());
}

TEST_CASE("q on scaled traces") {
  CHECK(q_on_scaled_traces(0, Alphabet::s) == TracePoly::one());
  TracePoly q1;
  q1.add_term(OddPartition{1}, s(1), 1);
  CHECK(q_on_scaled_traces(1, Alphabet::s) == q1);
  TracePoly q2;
  q2.add_term(OddPartition{1, 1}, s(1, 2), Rational(1, 2));
  CHECK(q_on_scaled_traces(2, Alphabet::s) == q2);
}

TEST_CASE("property: convolution sum (-1)^j q_i q_j vanishes above weight 0") {
  for (int m = 0; m <= 10; ++m) {
    Series sum(10);
    for (int j = 0; j <= m; ++j) {
      Series term = mul(q_poly(m - j), q_poly(j));
      if (j % 2) term = -term;
      sum += term;
    }
    CHECK(sum == (m == 0 ? Series::constant(1, 10) : Series(10)));
  }
}

TEST_CASE("property: traces substituted back give q_j") {
  for (int j = 0; j <= 10; ++j) CHECK(substitute_traces(q_on_traces(j), 10) == q_poly(j));
}
