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

#include <boost/math/special_functions/hermite.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "kmm/pfaffian.hpp"
#include "kmm/rational.hpp"

namespace kmm::oracle {

/// Determinant by fraction-exact Gaussian elimination.
inline Rational det(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

template <typename T>
std::vector<std::vector<T>> dense(const AntisymMatrix<T>& a) {
  std::vector<std::vector<T>> out(static_cast<std::size_t>(a.size()), std::vector<T>(static_cast<std::size_t>(a.size())));
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < a.size(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a.at(i, j);
  }
  return out;
}

/// Positive rational p/q with 1 <= p, q <= max.
inline Rational random_rational(std::mt19937_64& rng, int max = 30) {
  Rational r(static_cast<long>(1 + rng() % static_cast<unsigned>(max)),
             static_cast<long>(1 + rng() % static_cast<unsigned>(max)));
  r.canonicalize();
  return r;
}

inline Rational random_signed(std::mt19937_64& rng, int max = 30) {
  Rational r = random_rational(rng, max);
  return rng() % 2 ? r : Rational(-r);
}

inline Rational double_factorial(int n) {
  Rational out = 1;
  for (int k = n; k > 1; k -= 2) out *= k;
  return out;
}

/// Nodes and weights of n-point Gauss-Hermite quadrature for e^{-x^2}.
struct GaussHermite {
  std::vector<double> nodes, weights;

  explicit GaussHermite(unsigned n) {
    auto h = [n](double x) { return boost::math::hermite(n, x); };
    const double step = 1e-3;
    for (double x = -std::sqrt(2.0 * n + 1) - 1; x < std::sqrt(2.0 * n + 1) + 1; x += step) {
      if (h(x) == 0 || (h(x) < 0) != (h(x + step) < 0)) {
        double lo = x, hi = x + step;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          ((h(lo) < 0) != (h(mid) < 0) ? hi : lo) = mid;
        }
        nodes.push_back(0.5 * (lo + hi));
      }
    }
    double nfact = 1;
    for (unsigned k = 2; k <= n; ++k) nfact *= k;
    for (double x : nodes) {
      const double hm = boost::math::hermite(n - 1, x);
      weights.push_back(std::pow(2.0, n - 1) * nfact * std::sqrt(std::numbers::pi) / (n * n * hm * hm));
    }
  }

  /// E[f(X)] for X ~ N(0, variance).
  template <typename F>
  double expectation(double variance, F f) const {
    double s = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      s += weights[i] * f(std::sqrt(2 * variance) * nodes[i]);
    }
    return s / std::sqrt(std::numbers::pi);
  }
};

/// Tr(H^k) for H = [[a, b + ic], [b - ic, d]].
inline double trace_power(double a, double b, double c, double d, int k) {
  using C = std::complex<double>;
  C m[2][2] = {{a, C(b, c)}, {C(b, -c), d}};
  C p[2][2] = {{1, 0}, {0, 1}};
  for (int s = 0; s < k; ++s) {
    C q[2][2];
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) q[i][j] = p[i][0] * m[0][j] + p[i][1] * m[1][j];
    }
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) p[i][j] = q[i][j];
    }
  }
  return (p[0][0] + p[1][1]).real();
}

/// Closed form of PV int (x-y)/(2(x+y)) e^{-l1 x^2/2 - l2 y^2/2} dx dy.
inline double pv_closed_form(double l1, double l2) {
  return std::numbers::pi * (l2 - l1) / ((l1 + l2) * std::sqrt(l1 * l2));
}

}  // namespace kmm::oracle
