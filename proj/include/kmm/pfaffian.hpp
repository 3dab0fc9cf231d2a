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

#include <span>
#include <string>
#include <vector>

#include "kmm/rational.hpp"

namespace kmm {

/// Antisymmetric matrix stored by its strict upper triangle; A_ii = 0 and
/// A_ji = -A_ij hold by construction.
template <typename T>
class AntisymMatrix {
 public:
  explicit AntisymMatrix(int size = 0)
      : size_(size), upper_(static_cast<std::size_t>(size * (size > 0 ? size - 1 : 0) / 2)) {
    if (size < 0) throw DomainError("matrix size must be non-negative");
  }

  int size() const { return size_; }

  T at(int i, int j) const {
    if (i == j) return T(0);
    return i < j ? upper_[index(i, j)] : T(-upper_[index(j, i)]);
  }

  /// Sets A_ij and, implicitly, A_ji = -value. Requires i != j.
  void set(int i, int j, const T& value) {
    if (i == j) throw DomainError("diagonal of an antisymmetric matrix is fixed at zero");
    if (i < j) {
      upper_[index(i, j)] = value;
    } else {
      upper_[index(j, i)] = -value;
    }
  }

 private:
  std::size_t index(int i, int j) const {
    if (i < 0 || j >= size_) throw DomainError("antisymmetric matrix index out of range");
    // row-major strict upper triangle
    return static_cast<std::size_t>(i * (2 * size_ - i - 1) / 2 + (j - i - 1));
  }

  int size_;
  std::vector<T> upper_;
};

/// Exact Pfaffian by first-row expansion memoized over index subsets (size <= 30).
Rational pfaffian(const AntisymMatrix<Rational>& a);

/// Floating-point Pfaffian by pivoted skew-symmetric tridiagonalization.
double pfaffian(const AntisymMatrix<double>& a);

/// Entries (x_k - x_l) / (2 (x_k + x_l)). Throws DomainError naming the first
/// pair with x_k + x_l = 0.
AntisymMatrix<Rational> kernel_matrix(std::span<const Rational> xs);
AntisymMatrix<double> kernel_matrix(std::span<const double> xs);

/// Checks Pf((x_k - x_l)/(x_k + x_l)) = prod_{k<l} (x_k - x_l)/(x_k + x_l) exactly.
bool product_identity_check(std::span<const Rational> xs);

}  // namespace kmm
