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

#include "kmm/moment_expr.hpp"

#include <sstream>
#include <vector>

namespace kmm {

SymbolPair::SymbolPair(OddPartition a, OddPartition b) {
  if (b < a) std::swap(a, b);
  first = std::move(a);
  second = std::move(b);
}

void MomentExpr::check_order(int w) const {
  if (w != order_) {
    throw DomainError("moment term of weight " + std::to_string(w) +
                      " in expression of order " + std::to_string(order_));
  }
}

namespace {

template <typename Map, typename Key>
void accumulate(Map& m, const Key& k, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = m.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) m.erase(it);
  }
}

}  // namespace

void MomentExpr::add_linear(const OddPartition& p, const Rational& c) {
  check_order(p.weight());
  accumulate(linear_, p, c);
}

void MomentExpr::add_product(const OddPartition& a, const OddPartition& b, const Rational& c) {
  check_order(a.weight() + b.weight());
  if (a.empty()) {
    accumulate(linear_, b, c);
  } else if (b.empty()) {
    accumulate(linear_, a, c);
  } else {
    accumulate(quadratic_, SymbolPair(a, b), c);
  }
}

Rational MomentExpr::leading_coefficient() const {
  if (!linear_.empty()) return linear_.begin()->second;
  if (!quadratic_.empty()) return quadratic_.begin()->second;
  return 0;
}

std::pair<MomentExpr, Rational> MomentExpr::normalized() const {
  if (is_zero()) return {*this, Rational(1)};
  std::vector<Rational> values;
  for (const auto& [p, c] : linear_) values.push_back(c);
  for (const auto& [p, c] : quadratic_) values.push_back(c);
  Rational s = primitive_scale(values);
  if (leading_coefficient() < 0) s = -s;
  MomentExpr prim = *this * s;
  return {std::move(prim), Rational(1) / s};
}

MomentExpr MomentExpr::times_symbol(const OddPartition& p) const {
  if (!is_linear()) throw DomainError("only linear expressions can be multiplied by a symbol");
  MomentExpr out(order_ + p.weight());
  for (const auto& [q, c] : linear_) out.add_product(q, p, c);
  return out;
}

MomentExpr& MomentExpr::operator+=(const MomentExpr& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) order_ = o.order_;
  check_order(o.order_);
  for (const auto& [p, c] : o.linear_) accumulate(linear_, p, c);
  for (const auto& [p, c] : o.quadratic_) accumulate(quadratic_, p, c);
  return *this;
}

MomentExpr& MomentExpr::operator-=(const MomentExpr& o) { return *this += o * Rational(-1); }

MomentExpr& MomentExpr::operator*=(const Rational& c) {
  if (c == 0) {
    linear_.clear();
    quadratic_.clear();
    return *this;
  }
  for (auto& kv : linear_) kv.second *= c;
  for (auto& kv : quadratic_) kv.second *= c;
  return *this;
}

std::string MomentExpr::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  auto emit = [&](const Rational& c, const std::string& sym) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out << '-';
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (mag != 1) out << kmm::to_string(mag);
    out << sym;
  };
  for (const auto& [p, c] : linear_) emit(c, p.symbol());
  for (const auto& [p, c] : quadratic_) emit(c, p.first.symbol() + p.second.symbol());
  return out.str();
}

}  // namespace kmm
