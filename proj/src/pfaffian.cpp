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

#include "kmm/pfaffian.hpp"

#include <cmath>
#include <bit>
#include <cstdint>
#include <unordered_map>
#include <utility>

namespace kmm {

namespace {

void require_even(int n) {
  if (n % 2) throw DomainError("Pfaffian of odd-sized matrix (" + std::to_string(n) + ")");
}

class SubsetPfaffian {
 public:
  explicit SubsetPfaffian(const AntisymMatrix<Rational>& a) : a_(a) {}

  Rational operator()(std::uint32_t mask) {
    if (mask == 0) return 1;
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    const int i = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    Rational total = 0;
    int sign = 1;
    for (std::uint32_t m = rest; m != 0; m &= m - 1) {
      const int j = std::countr_zero(m);
      const Rational& aij = a_.at(i, j);
      if (aij != 0) {
        Rational sub = (*this)(rest & ~(std::uint32_t{1} << j));
        total += sign > 0 ? Rational(aij * sub) : Rational(-aij * sub);
      }
      sign = -sign;
    }
    memo_.emplace(mask, total);
    return total;
  }

 private:
  const AntisymMatrix<Rational>& a_;
  std::unordered_map<std::uint32_t, Rational> memo_;
};

}  // namespace

Rational pfaffian(const AntisymMatrix<Rational>& a) {
  const int n = a.size();
  require_even(n);
  if (n > 30) throw DomainError("exact Pfaffian supports sizes up to 30");
  if (n == 0) return 1;
  const std::uint32_t full = (n == 32) ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1);
  return SubsetPfaffian(a)(full);
}

double pfaffian(const AntisymMatrix<double>& in) {
  const int n = in.size();
  require_even(n);
  if (n == 0) return 1.0;
  std::vector<double> m(static_cast<std::size_t>(n * n));
  auto at = [&](int i, int j) -> double& { return m[static_cast<std::size_t>(i * n + j)]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) at(i, j) = in.at(i, j);
  }

  double result = 1.0;
  for (int k = 0; k + 1 < n; k += 2) {
    // pivot: largest |A_ik| below the diagonal block
    int kp = k + 1;
    for (int i = k + 2; i < n; ++i) {
      if (std::abs(at(i, k)) > std::abs(at(kp, k))) kp = i;
    }
    if (kp != k + 1) {
      for (int j = 0; j < n; ++j) std::swap(at(k + 1, j), at(kp, j));
      for (int i = 0; i < n; ++i) std::swap(at(i, k + 1), at(i, kp));
      result = -result;
    }
    const double pivot = at(k, k + 1);
    if (pivot == 0.0) return 0.0;
    result *= pivot;
    if (k + 2 < n) {
      // Gauss transform eliminating column k below row k+1
      std::vector<double> tau(static_cast<std::size_t>(n), 0.0);
      for (int i = k + 2; i < n; ++i) tau[static_cast<std::size_t>(i)] = at(k, i) / pivot;
      for (int i = k + 2; i < n; ++i) {
        for (int j = k + 2; j < n; ++j) {
          at(i, j) += tau[static_cast<std::size_t>(i)] * at(j, k + 1) -
                      tau[static_cast<std::size_t>(j)] * at(i, k + 1);
        }
      }
    }
  }
  return result;
}

namespace {

template <typename T>
AntisymMatrix<T> build_kernel(std::span<const T> xs) {
  const int n = static_cast<int>(xs.size());
  AntisymMatrix<T> out(n);
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      T den = xs[static_cast<std::size_t>(k)] + xs[static_cast<std::size_t>(l)];
      if (den == T(0)) {
        throw DomainError("kernel denominator x_" + std::to_string(k) + " + x_" +
                          std::to_string(l) + " vanishes");
      }
      T num = xs[static_cast<std::size_t>(k)] - xs[static_cast<std::size_t>(l)];
      out.set(k, l, T(num / (T(2) * den)));
    }
  }
  return out;
}

}  // namespace

AntisymMatrix<Rational> kernel_matrix(std::span<const Rational> xs) {
  return build_kernel<Rational>(xs);
}

AntisymMatrix<double> kernel_matrix(std::span<const double> xs) { return build_kernel<double>(xs); }

bool product_identity_check(std::span<const Rational> xs) {
  const int n = static_cast<int>(xs.size());
  require_even(n);
  AntisymMatrix<Rational> k = kernel_matrix(xs);
  // undo the factor 1/2 carried by every kernel entry: Pf(2A) = 2^{n/2} Pf(A)
  Rational lhs = pfaffian(k);
  for (int i = 0; i < n / 2; ++i) lhs *= 2;
  Rational rhs = 1;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      rhs *= Rational(xs[static_cast<std::size_t>(a)] - xs[static_cast<std::size_t>(b)]) /
             Rational(xs[static_cast<std::size_t>(a)] + xs[static_cast<std::size_t>(b)]);
    }
  }
  return lhs == rhs;
}

}  // namespace kmm
