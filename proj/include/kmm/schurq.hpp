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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kmm/rational.hpp"
#include "kmm/series.hpp"

namespace kmm {

/// Weakly decreasing tuple of odd positive integers. Indexes the trace product
/// prod_i Tr(H^{n_i}) and the moment symbol M_{n_1,n_2,...}.
class OddPartition {
 public:
  OddPartition() = default;
  /// Sorts into canonical (weakly decreasing) order; rejects even or non-positive parts.
  explicit OddPartition(std::vector<int> parts);
  OddPartition(std::initializer_list<int> parts) : OddPartition(std::vector<int>(parts)) {}

  const std::vector<int>& parts() const { return parts_; }
  int weight() const;
  int length() const { return static_cast<int>(parts_.size()); }
  bool empty() const { return parts_.empty(); }

  /// (part, multiplicity) pairs, largest part first.
  std::vector<std::pair<int, int>> multiplicities() const;

  /// Multiset union.
  OddPartition join(const OddPartition& other) const;

  /// Descending lexicographic order on part lists: (5,1) < (3,3) < (3,1,1,1).
  /// "Smaller" sorts first, i.e. printed first.
  std::weak_ordering operator<=>(const OddPartition& other) const;
  bool operator==(const OddPartition& other) const = default;

  /// "5,1^3"; "" for the empty partition.
  std::string label() const;
  /// "M_{5,1^3}"; "1" for the empty partition.
  std::string symbol() const;

 private:
  std::vector<int> parts_;
};

/// All odd partitions of a weight, canonical order. Built once per weight and
/// safe to call from several threads.
const std::vector<OddPartition>& odd_partitions(int weight);

/// Odd partitions with an even number of parts (the ones whose moments
/// survive for an even potential).
std::vector<OddPartition> even_length_partitions(int weight);

/// Linear combination of trace products, each optionally carrying a monomial in
/// the time variables: sum c * x^extra * prod Tr(H^{n_i}).
class TracePoly {
 public:
  using Key = std::pair<OddPartition, Multidegree>;
  using Terms = std::map<Key, Rational>;

  static TracePoly one();

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(const OddPartition& p, const Multidegree& extra, const Rational& c);

  friend TracePoly operator*(const TracePoly& a, const TracePoly& b);
  friend bool operator==(const TracePoly&, const TracePoly&) = default;

 private:
  Terms terms_;
};

/// q_j(t) = [x^j] exp(2 sum_k t_{2k+1} x^{2k+1}), a homogeneous series of weight j
/// with truncation W. Zero for negative j.
Series q_poly(int j, int truncation = kDefaultTruncation, Alphabet alphabet = Alphabet::t);

/// q_j evaluated at t_n = Tr(H^n)/n.
TracePoly q_on_traces(int j);

/// q_j evaluated at t_n = s_n Tr(H^n)/2; every term carries the s-monomial.
TracePoly q_on_scaled_traces(int j, Alphabet alphabet);

}  // namespace kmm
