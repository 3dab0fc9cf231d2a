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

#include "kmm/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kmm/pfaffian.hpp"
#include "kmm/schurq.hpp"
#include "kmm/wick.hpp"

namespace kmm {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

template <typename F>
double integrate(F f, double a, double b, double tol, int depth, double* error) {
  double err = 0;
  const double value = GK::integrate(f, a, b, static_cast<unsigned>(depth), tol, &err);
  if (error) *error = err;
  return value;
}

void check_converged(const std::string& what, double value, double error, double tol) {
  if (!std::isfinite(value) || error > 10 * tol * std::max(1.0, std::abs(value))) {
    std::ostringstream msg;
    msg << what << " did not converge: value " << value << ", achieved error " << error
        << ", requested " << tol;
    throw ConvergenceError(msg.str(), value, error);
  }
}

}  // namespace

double truncation_radius(double lambda_min, double tol) {
  if (!(lambda_min > 0)) throw DomainError("lambda must be positive");
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  // e^{-lambda r^2 / 4} below tol * 1e-6, with room for polynomial prefactors
  return std::sqrt(4.0 * (std::log(1.0 / tol) + 6 * std::log(10.0) + 8.0) / lambda_min);
}

double principal_value(const std::function<double(double)>& h, double U, double tol,
                       double* error, const QuadOptions& options) {
  if (!(U > 0)) throw DomainError("principal value needs a positive range");
  auto f = [&](double u) { return (h(u) - h(-u)) / u; };
  double err = 0;
  const double value = integrate(f, 0.0, U, tol, options.max_depth, &err);
  check_converged("principal value integral", value, err, tol);
  if (error) *error = err;
  return value;
}

double pv_double_integral(const PVIntegrand& p, double tol, double* error,
                          const QuadOptions& options) {
  if (!(p.lambda_i > 0) || !(p.lambda_j > 0)) throw DomainError("lambda must be positive");
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  if (p.g > 0) throw DomainError("a positive quartic coupling makes the integral diverge");
  const double R = truncation_radius(std::min(p.lambda_i, p.lambda_j), tol);
  const double dl = p.lambda_i - p.lambda_j;
  const double inner_tol = tol * 1e-2;
  double worst_inner = 0;

  auto outer = [&](double u) {
    auto inner = [&](double v) {
      const double x = 0.5 * (u + v);
      const double y = 0.5 * (u - v);
      const double swapped = -0.5 * p.lambda_i * y * y - 0.5 * p.lambda_j * x * x;
      const double quartic = p.g * (x * x * x * x + y * y * y * y);
      // e^A - e^B with d = A - B = -(lambda_i - lambda_j) u v / 2, divided by u
      const double d = -0.5 * dl * u * v;
      const double diff = d > 0 ? -std::exp(swapped + d + quartic) * std::expm1(-d)
                                : std::exp(swapped + quartic) * std::expm1(d);
      return 0.25 * v * diff / u;
    };
    double err = 0;
    const double value = integrate(inner, -R, R, inner_tol, options.max_depth, &err);
    worst_inner = std::max(worst_inner, err);
    return value;
  };
  double err = 0;
  const double value = integrate(outer, 0.0, R, tol, options.max_depth, &err);
  err += R * worst_inner;
  check_converged("principal value double integral", value, err, tol);
  if (error) *error = err;
  return value;
}

std::vector<std::vector<double>> pv_matrix(const std::vector<double>& lambdas, double g,
                                           double tol, double* max_error,
                                           const QuadOptions& options) {
  const int n = static_cast<int>(lambdas.size());
  std::vector<std::vector<double>> m(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> values(pairs.size()), errors(pairs.size());
  std::vector<std::string> failures(pairs.size());
  const long count = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic) if (options.parallel)
  for (long k = 0; k < count; ++k) {
    const auto [i, j] = pairs[static_cast<std::size_t>(k)];
    QuadOptions inner = options;
    inner.parallel = false;
    try {
      values[static_cast<std::size_t>(k)] =
          pv_double_integral({lambdas[static_cast<std::size_t>(i)], lambdas[static_cast<std::size_t>(j)], g},
                             tol, &errors[static_cast<std::size_t>(k)], inner);
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(k)] = e.what();
    }
  }
  double worst = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (!failures[k].empty()) {
      throw ConvergenceError("entry (" + std::to_string(pairs[k].first + 1) + "," +
                                 std::to_string(pairs[k].second + 1) + "): " + failures[k],
                             values[k], errors[k]);
    }
    const auto [i, j] = pairs[k];
    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = values[k];
    m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = -values[k];
    worst = std::max(worst, errors[k]);
  }
  if (max_error) *max_error = worst;
  return m;
}

double z_prefactor(const std::vector<double>& lambdas) {
  const int n = static_cast<int>(lambdas.size());
  double c = (n * (n - 1) / 2) % 2 ? -1.0 : 1.0;
  for (int i = 0; i < n; ++i) {
    const double li = lambdas[static_cast<std::size_t>(i)];
    if (!(li > 0)) throw DomainError("lambda must be positive");
    c *= std::sqrt(2 * li) / std::sqrt(2 * std::numbers::pi);
    for (int j = i + 1; j < n; ++j) {
      const double lj = lambdas[static_cast<std::size_t>(j)];
      c *= (li + lj) / (lj - li);
    }
  }
  return c;
}

namespace {

double z_at(const std::vector<double>& lambdas, double g, double tol, double* entry_error,
            const QuadOptions& options) {
  const auto pv = pv_matrix(lambdas, g, tol, entry_error, options);
  const int n = static_cast<int>(lambdas.size());
  AntisymMatrix<double> a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      a.set(i, j, pv[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
    }
  }
  return z_prefactor(lambdas) * pfaffian(a);
}

}  // namespace

ZReport z_eval(const std::vector<double>& lambdas, double g, double tol,
               const QuadOptions& options) {
  const int n = static_cast<int>(lambdas.size());
  if (n == 0 || n % 2) throw DomainError("z-eval needs an even, nonzero number of lambdas");
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  if (g > 0) throw DomainError("a positive quartic coupling makes Z diverge; use g <= 0");
  ZReport report;
  report.N = n;
  report.lambdas = lambdas;
  report.g = g;
  report.tol = tol;
  for (double l : lambdas) {
    if (!(l > 0)) throw DomainError("lambda must be positive");
  }
  const double scale = *std::max_element(lambdas.begin(), lambdas.end());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double sep = std::abs(lambdas[static_cast<std::size_t>(i)] - lambdas[static_cast<std::size_t>(j)]) / scale;
      std::ostringstream pair;
      pair << "lambda_" << i + 1 << " and lambda_" << j + 1;
      if (sep < kSeparationThreshold) {
        throw DomainError(pair.str() + " coincide to relative precision " +
                          std::to_string(sep) + "; Z is not evaluated");
      }
      if (sep < kConditioningWarning) {
        report.warnings.push_back(pair.str() + " are nearly coincident; the result is ill-conditioned");
      }
    }
  }
  double coarse_err = 0, fine_err = 0;
  const double coarse = z_at(lambdas, g, tol, &coarse_err, options);
  const double fine = z_at(lambdas, g, tol / 8, &fine_err, options);
  report.value = fine;
  report.error_estimate = std::abs(fine - coarse) +
                          n * n * 64 * std::numeric_limits<double>::epsilon() * std::abs(fine);
  return report;
}

ResidueReport residue_side_check(int k, const std::vector<Rational>& lambdas, double tol,
                                 const QuadOptions& options) {
  if (lambdas.size() != 2) throw DomainError("the residue check is implemented for N = 2");
  if (k < 1) throw DomainError("k must be at least 1");
  if (lambdas[0] == lambdas[1]) throw DomainError("lambdas must be distinct");
  ResidueReport report;
  report.k = k;
  report.lambdas = lambdas;
  const ExternalField field(lambdas);

  Rational lhs = 0;
  const TracePoly qk = q_on_traces(k);
  for (const auto& [key, c] : qk.terms()) {
    lhs += c * gaussian_trace_moment(key.first.parts(), field, WickOptions{std::max(12, k), true});
  }
  if (k % 2) lhs = -lhs;
  report.lhs_exact = lhs;
  report.lhs = lhs.get_d();

  const double l1 = lambdas[0].get_d();
  const double l2 = lambdas[1].get_d();
  const double R = truncation_radius(std::min(l1, l2), tol) + std::sqrt(2.0 * k / std::min(l1, l2));
  const double sign = k % 2 ? -1.0 : 1.0;
  double worst_inner = 0;
  auto outer = [&](double x) {
    auto inner = [&](double y) {
      return sign * (std::pow(x, k) - std::pow(y, k)) * std::exp(-0.5 * l2 * x * x - 0.5 * l1 * y * y);
    };
    double err = 0;
    const double v = integrate(inner, -R, R, tol * 1e-2, options.max_depth, &err);
    worst_inner = std::max(worst_inner, err);
    return v;
  };
  double err = 0;
  const double integral = integrate(outer, -R, R, tol, options.max_depth, &err);
  err += 2 * R * worst_inner;
  const double pref = std::sqrt(l1 * l2) / std::numbers::pi * (l1 + l2) / (l2 - l1);
  report.rhs = pref * integral;
  report.rhs_error = std::abs(pref) * err;
  report.ratio = lhs == 0 ? std::numeric_limits<double>::quiet_NaN() : report.lhs / report.rhs;
  return report;
}

}  // namespace kmm
