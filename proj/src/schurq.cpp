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

#include "kmm/schurq.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <sstream>

namespace kmm {

OddPartition::OddPartition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (int p : parts_) {
    if (p < 1 || p % 2 == 0) {
      throw DomainError("partition part must be odd and positive, got " + std::to_string(p));
    }
  }
  std::sort(parts_.begin(), parts_.end(), std::greater<>());
}

int OddPartition::weight() const {
  int w = 0;
  for (int p : parts_) w += p;
  return w;
}

std::vector<std::pair<int, int>> OddPartition::multiplicities() const {
  std::vector<std::pair<int, int>> out;
  for (int p : parts_) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  }
  return out;
}

OddPartition OddPartition::join(const OddPartition& other) const {
  std::vector<int> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return OddPartition(std::move(all));
}

std::weak_ordering OddPartition::operator<=>(const OddPartition& other) const {
  if (auto c = weight() <=> other.weight(); c != 0) return c;
  // larger parts first in the printed order
  auto c = std::lexicographical_compare_three_way(parts_.begin(), parts_.end(),
                                                  other.parts_.begin(), other.parts_.end());
  if (c == 0) return std::weak_ordering::equivalent;
  return c < 0 ? std::weak_ordering::greater : std::weak_ordering::less;
}

std::string OddPartition::label() const {
  std::ostringstream out;
  bool first = true;
  for (auto [part, mult] : multiplicities()) {
    if (!first) out << ',';
    first = false;
    out << part;
    if (mult > 1) out << '^' << mult;
  }
  return out.str();
}

std::string OddPartition::symbol() const {
  if (empty()) return "1";
  return "M_{" + label() + "}";
}

namespace {

void enumerate(int remaining, int max_part, std::vector<int>& prefix,
               std::vector<OddPartition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  int p = std::min(max_part, remaining);
  if (p % 2 == 0) --p;
  for (; p >= 1; p -= 2) {
    prefix.push_back(p);
    enumerate(remaining - p, p, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

const std::vector<OddPartition>& odd_partitions(int weight) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const std::vector<OddPartition>>> memo;
  if (weight < 0) throw DomainError("negative partition weight");
  std::lock_guard lock(mutex);
  auto& slot = memo[weight];
  if (!slot) {
    std::vector<OddPartition> out;
    std::vector<int> prefix;
    enumerate(weight, weight, prefix, out);
    std::sort(out.begin(), out.end());
    slot = std::make_unique<const std::vector<OddPartition>>(std::move(out));
  }
  return *slot;
}

std::vector<OddPartition> even_length_partitions(int weight) {
  std::vector<OddPartition> out;
  for (const auto& p : odd_partitions(weight)) {
    if (p.length() % 2 == 0) out.push_back(p);
  }
  return out;
}

TracePoly TracePoly::one() {
  TracePoly p;
  p.add_term(OddPartition{}, Multidegree{}, 1);
  return p;
}

void TracePoly::add_term(const OddPartition& p, const Multidegree& extra, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(Key{p, extra}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

TracePoly operator*(const TracePoly& a, const TracePoly& b) {
  TracePoly out;
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      out.add_term(ka.first.join(kb.first), ka.second * kb.second, ca * cb);
    }
  }
  return out;
}

Series q_poly(int j, int truncation, Alphabet alphabet) {
  if (j < 0 || j > truncation) return Series(truncation);
  Series generator(truncation);
  for (int n = 1; n <= truncation; n += 2) {
    generator.add_term(Multidegree::variable(alphabet, n), 2);
  }
  return grade(exp_truncated(generator), j);
}

TracePoly q_on_traces(int j) {
  TracePoly out;
  if (j < 0) return out;
  for (const auto& p : odd_partitions(j)) {
    Rational c = 1;
    for (auto [part, mult] : p.multiplicities()) {
      Rational base(2, part);
      base.canonicalize();
      Rational pw = 1;
      for (int r = 0; r < mult; ++r) pw *= base;
      c *= pw / factorial(mult);
    }
    out.add_term(p, Multidegree{}, c);
  }
  return out;
}

TracePoly q_on_scaled_traces(int j, Alphabet alphabet) {
  TracePoly out;
  if (j < 0) return out;
  for (const auto& p : odd_partitions(j)) {
    Rational c = 1;
    std::vector<Multidegree::Entry> mono;
    for (auto [part, mult] : p.multiplicities()) {
      c /= factorial(mult);
      mono.push_back({alphabet, part, mult});
    }
    out.add_term(p, Multidegree(std::move(mono)), c);
  }
  return out;
}

}  // namespace kmm
