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

#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kmm/rational.hpp"

namespace kmm {

/// Two families of odd time variables: t_1, t_3, ... and s_1, s_3, ...
enum class Alphabet : std::uint8_t { t = 0, s = 1 };

char alphabet_letter(Alphabet a);
Alphabet parse_alphabet(std::string_view name);

inline constexpr int kDefaultTruncation = 10;

/// Exponent vector over odd variables of both alphabets. Weight of x_n^e is n*e.
class Multidegree {
 public:
  struct Entry {
    Alphabet alphabet;
    int index;
    int exponent;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  Multidegree() = default;
  Multidegree(std::initializer_list<Entry> entries);
  explicit Multidegree(std::vector<Entry> entries);

  static Multidegree variable(Alphabet a, int index, int exponent = 1);

  std::span<const Entry> entries() const { return entries_; }
  bool is_one() const { return entries_.empty(); }
  int weight() const;
  int weight(Alphabet a) const;
  int exponent(Alphabet a, int index) const;
  /// Part of the monomial that lives in one alphabet.
  Multidegree restricted(Alphabet a) const;

  /// Variable indices repeated by exponent, largest first; ties put s before t.
  std::vector<std::pair<int, Alphabet>> index_sequence() const;

  Multidegree operator*(const Multidegree& other) const;

  /// Graded lexicographic: weight, then index_sequence.
  std::strong_ordering operator<=>(const Multidegree& other) const;
  bool operator==(const Multidegree& other) const { return entries_ == other.entries_; }

  /// e.g. "s_5 s_1 t_1^2"; "1" for the empty monomial.
  std::string to_string() const;

 private:
  void normalize();
  std::vector<Entry> entries_;
};

/// Truncated multivariate power series with exact rational coefficients.
/// Terms of weight above the truncation are never stored.
class Series {
 public:
  using Terms = std::map<Multidegree, Rational>;

  explicit Series(int truncation = kDefaultTruncation) : truncation_(truncation) {}

  static Series constant(const Rational& c, int truncation = kDefaultTruncation);
  static Series monomial(const Multidegree& m, const Rational& c,
                         int truncation = kDefaultTruncation);

  int truncation() const { return truncation_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c*m; silently drops terms above the truncation weight.
  void add_term(const Multidegree& m, const Rational& c);

  Series& operator+=(const Series& other);
  Series& operator-=(const Series& other);
  Series& operator*=(const Rational& c);
  Series operator-() const;

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(Series a, const Rational& c) { return a *= c; }
  friend Series operator*(const Rational& c, Series a) { return a *= c; }
  friend Series operator*(const Series& a, const Series& b);
  friend bool operator==(const Series& a, const Series& b) { return a.terms_ == b.terms_; }

  std::string to_string() const;

 private:
  int truncation_;
  Terms terms_;
};

/// Builds a series in canonical form; throws DomainError naming the first
/// monomial whose weight exceeds the truncation.
Series make_series(const std::vector<std::pair<Multidegree, Rational>>& terms, int truncation);

/// Product truncated at min of the operand truncations.
Series mul(const Series& a, const Series& b);

/// sum_p a^p / p!, requires a vanishing constant term.
Series exp_truncated(const Series& a);

/// Throws DomainError when weight(m) exceeds the truncation.
Rational coeff(const Series& a, const Multidegree& m);

/// Homogeneous weight-w part.
Series grade(const Series& a, int w);

}  // namespace kmm
