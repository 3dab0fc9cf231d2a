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

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kmm/rational.hpp"
#include "kmm/schurq.hpp"

namespace kmm {

/// Lambda = diag(lambda_1, ..., lambda_N) with positive exact entries.
class ExternalField {
 public:
  explicit ExternalField(std::vector<Rational> lambdas);

  /// N distinct rationals p/q with 1 <= p, q <= max_entry drawn from a
  /// seeded mt19937_64. Deterministic across platforms.
  static ExternalField random(int n, std::uint64_t seed, int max_entry = 50);

  int size() const { return static_cast<int>(lambdas_.size()); }
  const Rational& lambda(int i) const { return lambdas_.at(static_cast<std::size_t>(i)); }
  const std::vector<Rational>& lambdas() const { return lambdas_; }
  std::vector<double> as_doubles() const;

 private:
  std::vector<Rational> lambdas_;
};

/// Truncated power series c_0 + c_1 g + ... + c_P g^P in the quartic coupling.
class GSeries {
 public:
  explicit GSeries(int order = 0) : coeffs_(static_cast<std::size_t>(order) + 1) {}
  explicit GSeries(std::vector<Rational> coeffs);

  static GSeries constant(const Rational& c, int order);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const Rational& operator[](int p) const { return coeffs_.at(static_cast<std::size_t>(p)); }
  Rational& operator[](int p) { return coeffs_.at(static_cast<std::size_t>(p)); }
  bool is_zero() const;

  GSeries& operator+=(const GSeries& o);
  GSeries& operator-=(const GSeries& o);
  GSeries& operator*=(const Rational& c);
  friend GSeries operator+(GSeries a, const GSeries& b) { return a += b; }
  friend GSeries operator-(GSeries a, const GSeries& b) { return a -= b; }
  friend GSeries operator*(GSeries a, const Rational& c) { return a *= c; }
  friend GSeries operator*(const Rational& c, GSeries a) { return a *= c; }
  friend GSeries operator*(const GSeries& a, const GSeries& b);
  /// Requires b[0] != 0.
  friend GSeries operator/(const GSeries& a, const GSeries& b);
  friend bool operator==(const GSeries&, const GSeries&) = default;

  std::string to_string() const;

 private:
  std::vector<Rational> coeffs_;
};

/// <H_ab H_cd> under exp(-Tr(Lambda H^2)/2): 2 delta_ad delta_bc / (lambda_a + lambda_b).
/// Indices are zero based.
Rational covariance(int a, int b, int c, int d, const ExternalField& field);

struct WickOptions {
  /// Largest total H-degree of a single Gaussian integrand (11!! pairings at 12).
  int degree_cap = 12;
  /// Use the OpenMP kernel; the serial reference is always available separately.
  bool parallel = true;
};

/// (D-1)!!, the number of Wick pairings of D entries.
double pairing_count(int degree);

/// Exact int dP_Lambda prod_i Tr(H^{p_i}) by summing over all Wick pairings.
/// Faces of each pairing are found by union-find, decoupled face classes are
/// summed independently and cached, and the reduction over OpenMP threads is
/// exact, so the result does not depend on the thread count.
Rational gaussian_trace_moment(std::span<const int> powers, const ExternalField& field,
                               const WickOptions& options = {});

/// Straightforward serial evaluation: every pairing, every index assignment.
/// Kept as the reference the kernel is tested against.
Rational gaussian_trace_moment_reference(std::span<const int> powers, const ExternalField& field,
                                         const WickOptions& options = {});

/// Normalized moment <prod Tr(H^{k_i})> for V_0(x) = g x^4, as a series in g
/// through order g_order. Odd total degree gives the zero series.
GSeries moment(std::span<const int> key, const ExternalField& field, int g_order,
               const WickOptions& options = {});
GSeries moment(const OddPartition& key, const ExternalField& field, int g_order,
               const WickOptions& options = {});

/// Memoizing front end over one field. Not safe for concurrent use; the
/// kernels it calls parallelize internally.
class WickEngine {
 public:
  explicit WickEngine(ExternalField field, WickOptions options = {});

  const ExternalField& field() const { return field_; }
  const WickOptions& options() const { return options_; }

  const Rational& trace_moment(std::vector<int> powers);
  GSeries moment(const OddPartition& key, int g_order);

 private:
  ExternalField field_;
  WickOptions options_;
  std::map<std::vector<int>, Rational> trace_cache_;
  std::map<std::pair<OddPartition, int>, GSeries> moment_cache_;
};

}  // namespace kmm
