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

#include <map>
#include <string>
#include <utility>

#include "kmm/rational.hpp"
#include "kmm/schurq.hpp"

namespace kmm {

/// Unordered product M_a M_b of two non-trivial moment symbols, stored with
/// first <= second in the canonical partition order.
struct SymbolPair {
  OddPartition first;
  OddPartition second;

  SymbolPair(OddPartition a, OddPartition b);
  int weight() const { return first.weight() + second.weight(); }
  auto operator<=>(const SymbolPair&) const = default;
  bool operator==(const SymbolPair&) const = default;
};

/// Exact linear combination of moment symbols and products of two moment
/// symbols, all of the same total weight. M_{} = 1, so a product with the
/// empty symbol is stored as a linear term.
class MomentExpr {
 public:
  using Linear = std::map<OddPartition, Rational>;
  using Quadratic = std::map<SymbolPair, Rational>;

  explicit MomentExpr(int order = 0) : order_(order) {}

  int order() const { return order_; }
  const Linear& linear() const { return linear_; }
  const Quadratic& quadratic() const { return quadratic_; }
  bool is_zero() const { return linear_.empty() && quadratic_.empty(); }
  bool is_linear() const { return quadratic_.empty(); }

  /// Throws DomainError if the symbol weight differs from the order.
  void add_linear(const OddPartition& p, const Rational& c);
  void add_product(const OddPartition& a, const OddPartition& b, const Rational& c);

  /// Coefficient of the first term in canonical order (linear terms first).
  Rational leading_coefficient() const;

  /// Returns (primitive, scale) with *this == scale * primitive, where the
  /// primitive has coprime integer coefficients and a positive leading one.
  std::pair<MomentExpr, Rational> normalized() const;

  /// Multiplies a linear expression by M_p; the result has order + weight(p).
  MomentExpr times_symbol(const OddPartition& p) const;

  MomentExpr& operator+=(const MomentExpr& o);
  MomentExpr& operator-=(const MomentExpr& o);
  MomentExpr& operator*=(const Rational& c);
  friend MomentExpr operator+(MomentExpr a, const MomentExpr& b) { return a += b; }
  friend MomentExpr operator-(MomentExpr a, const MomentExpr& b) { return a -= b; }
  friend MomentExpr operator*(MomentExpr a, const Rational& c) { return a *= c; }
  friend MomentExpr operator*(const Rational& c, MomentExpr a) { return a *= c; }
  friend bool operator==(const MomentExpr&, const MomentExpr&) = default;

  /// e.g. "9M_{5,1} - 5M_{3^2} - 15M_{3,1}M_{1^2}".
  std::string to_string() const;

 private:
  void check_order(int w) const;

  int order_;
  Linear linear_;
  Quadratic quadratic_;
};

}  // namespace kmm
