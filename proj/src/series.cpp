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

#include "kmm/series.hpp"

#include <algorithm>
#include <sstream>

namespace kmm {

char alphabet_letter(Alphabet a) { return a == Alphabet::t ? 't' : 's'; }

Alphabet parse_alphabet(std::string_view name) {
  if (name == "t") return Alphabet::t;
  if (name == "s") return Alphabet::s;
  throw DomainError("unknown alphabet '" + std::string(name) + "'");
}

Multidegree::Multidegree(std::initializer_list<Entry> entries) : entries_(entries) {
  normalize();
}

Multidegree::Multidegree(std::vector<Entry> entries) : entries_(std::move(entries)) {
  normalize();
}

Multidegree Multidegree::variable(Alphabet a, int index, int exponent) {
  return Multidegree{{a, index, exponent}};
}

void Multidegree::normalize() {
  for (const auto& e : entries_) {
    if (e.index < 1 || e.index % 2 == 0) {
      throw DomainError("time variable index must be odd and positive, got " +
                        std::to_string(e.index));
    }
    if (e.exponent < 0) throw DomainError("negative exponent in monomial");
  }
  std::sort(entries_.begin(), entries_.end(), [](const Entry& x, const Entry& y) {
    return std::pair(x.alphabet, x.index) < std::pair(y.alphabet, y.index);
  });
  std::vector<Entry> merged;
  for (const auto& e : entries_) {
    if (!merged.empty() && merged.back().alphabet == e.alphabet && merged.back().index == e.index) {
      merged.back().exponent += e.exponent;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [](const Entry& e) { return e.exponent == 0; });
  entries_ = std::move(merged);
}

int Multidegree::weight() const {
  int w = 0;
  for (const auto& e : entries_) w += e.index * e.exponent;
  return w;
}

int Multidegree::weight(Alphabet a) const {
  int w = 0;
  for (const auto& e : entries_) {
    if (e.alphabet == a) w += e.index * e.exponent;
  }
  return w;
}

int Multidegree::exponent(Alphabet a, int index) const {
  for (const auto& e : entries_) {
    if (e.alphabet == a && e.index == index) return e.exponent;
  }
  return 0;
}

Multidegree Multidegree::restricted(Alphabet a) const {
  std::vector<Entry> kept;
  for (const auto& e : entries_) {
    if (e.alphabet == a) kept.push_back(e);
  }
  return Multidegree(std::move(kept));
}

std::vector<std::pair<int, Alphabet>> Multidegree::index_sequence() const {
  std::vector<std::pair<int, Alphabet>> seq;
  for (const auto& e : entries_) {
    for (int k = 0; k < e.exponent; ++k) seq.emplace_back(e.index, e.alphabet);
  }
  std::sort(seq.begin(), seq.end(), std::greater<>());
  return seq;
}

Multidegree Multidegree::operator*(const Multidegree& other) const {
  std::vector<Entry> all = entries_;
  all.insert(all.end(), other.entries_.begin(), other.entries_.end());
  return Multidegree(std::move(all));
}

std::strong_ordering Multidegree::operator<=>(const Multidegree& other) const {
  if (auto c = weight() <=> other.weight(); c != 0) return c;
  auto a = index_sequence();
  auto b = other.index_sequence();
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

std::string Multidegree::to_string() const {
  if (entries_.empty()) return "1";
  // s before t, larger indices first, matching the printed tables
  std::vector<Entry> shown = entries_;
  std::sort(shown.begin(), shown.end(), [](const Entry& x, const Entry& y) {
    if (x.alphabet != y.alphabet) return x.alphabet == Alphabet::s;
    return x.index > y.index;
  });
  std::ostringstream out;
  bool first = true;
  for (const auto& e : shown) {
    if (!first) out << ' ';
    first = false;
    out << alphabet_letter(e.alphabet) << '_' << e.index;
    if (e.exponent != 1) out << '^' << e.exponent;
  }
  return out.str();
}

Series Series::constant(const Rational& c, int truncation) {
  Series s(truncation);
  s.add_term(Multidegree{}, c);
  return s;
}

Series Series::monomial(const Multidegree& m, const Rational& c, int truncation) {
  Series s(truncation);
  s.add_term(m, c);
  return s;
}

void Series::add_term(const Multidegree& m, const Rational& c) {
  if (c == 0 || m.weight() > truncation_) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Series& Series::operator+=(const Series& other) {
  truncation_ = std::min(truncation_, other.truncation_);
  std::erase_if(terms_, [this](const auto& kv) { return kv.first.weight() > truncation_; });
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Series& Series::operator-=(const Series& other) { return *this += -other; }

Series& Series::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& kv : terms_) kv.second *= c;
  return *this;
}

Series Series::operator-() const {
  Series out = *this;
  for (auto& kv : out.terms_) kv.second = -kv.second;
  return out;
}

Series operator*(const Series& a, const Series& b) {
  Series out(std::min(a.truncation_, b.truncation_));
  for (const auto& [ma, ca] : a.terms_) {
    const int wa = ma.weight();
    for (const auto& [mb, cb] : b.terms_) {
      if (wa + mb.weight() > out.truncation_) continue;
      out.add_term(ma * mb, ca * cb);
    }
  }
  return out;
}

std::string Series::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out << '-';
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (m.is_one()) {
      out << kmm::to_string(mag);
    } else {
      if (mag != 1) out << kmm::to_string(mag) << ' ';
      out << m.to_string();
    }
  }
  return out.str();
}

Series make_series(const std::vector<std::pair<Multidegree, Rational>>& terms, int truncation) {
  if (truncation < 0) throw DomainError("truncation weight must be non-negative");
  Series s(truncation);
  for (const auto& [m, c] : terms) {
    if (m.weight() > truncation) {
      throw DomainError("monomial " + m.to_string() + " has weight " +
                        std::to_string(m.weight()) + " above truncation " +
                        std::to_string(truncation));
    }
    s.add_term(m, c);
  }
  return s;
}

Series mul(const Series& a, const Series& b) { return a * b; }

Series exp_truncated(const Series& a) {
  for (const auto& [m, c] : a.terms()) {
    if (m.is_one()) throw DomainError("exp_truncated: argument has nonzero constant term");
  }
  const int w = a.truncation();
  Series result = Series::constant(1, w);
  Series power = Series::constant(1, w);
  for (int p = 1; p <= w; ++p) {
    power = power * a;
    if (power.is_zero()) break;
    result += power * (Rational(1) / factorial(p));
  }
  return result;
}

Rational coeff(const Series& a, const Multidegree& m) {
  if (m.weight() > a.truncation()) {
    throw DomainError("coefficient of " + m.to_string() + " is beyond truncation weight " +
                      std::to_string(a.truncation()));
  }
  auto it = a.terms().find(m);
  return it == a.terms().end() ? Rational(0) : it->second;
}

Series grade(const Series& a, int w) {
  Series out(a.truncation());
  for (const auto& [m, c] : a.terms()) {
    if (m.weight() == w) out.add_term(m, c);
  }
  return out;
}

}  // namespace kmm
