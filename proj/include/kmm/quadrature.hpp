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

#include <functional>
#include <string>
#include <vector>

#include "kmm/rational.hpp"

namespace kmm {

/// The adaptive scheme did not reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double value, double achieved)
      : Error(what), value_(value), achieved_(achieved) {}
  double value() const { return value_; }
  double achieved() const { return achieved_; }

 private:
  double value_;
  double achieved_;
};

/// Weight e^{-lambda_i x^2/2 - lambda_j y^2/2 + g x^4 + g y^4}; g <= 0.
struct PVIntegrand {
  double lambda_i = 1;
  double lambda_j = 1;
  double g = 0;
};

struct QuadOptions {
  int max_depth = 15;
  bool parallel = true;
};

/// Half-width of the box outside of which e^{-lambda_min r^2 / 4} is negligible at tol.
double truncation_radius(double lambda_min, double tol);

/// PV int_{-U}^{U} h(u)/u du, computed as int_0^U (h(u) - h(-u))/u du.
double principal_value(const std::function<double(double)>& h, double U, double tol,
                       double* error = nullptr, const QuadOptions& options = {});

/// PV of the double integral of (x-y)/(2(x+y)) times the weight, in the
/// coordinates u = x+y, v = x-y.
double pv_double_integral(const PVIntegrand& p, double tol, double* error = nullptr,
                          const QuadOptions& options = {});

struct ZReport {
  int N = 0;
  std::vector<double> lambdas;
  double g = 0;
  double tol = 0;
  double value = 0;
  double error_estimate = 0;
  std::vector<std::string> warnings;
};

/// Relative separation of the eigenvalues below which z_eval refuses.
inline constexpr double kSeparationThreshold = 1e-8;
/// Relative separation below which z_eval warns about conditioning.
inline constexpr double kConditioningWarning = 1e-3;

/// C(Lambda) Pf(PV matrix) at t = 0 with potential g x^4.
ZReport z_eval(const std::vector<double>& lambdas, double g, double tol,
               const QuadOptions& options = {});

/// Antisymmetric matrix of principal-value integrals entering z_eval.
std::vector<std::vector<double>> pv_matrix(const std::vector<double>& lambdas, double g,
                                           double tol, double* max_error = nullptr,
                                           const QuadOptions& options = {});

/// Prefactor of the Pfaffian; pairwise distinct positive lambdas.
double z_prefactor(const std::vector<double>& lambdas);

struct ResidueReport {
  int k = 0;
  std::vector<Rational> lambdas;
  Rational lhs_exact;  // (-1)^k < q_k(H~) > at g = 0
  double lhs = 0;
  double rhs = 0;
  double rhs_error = 0;
  double ratio = 0;  // NaN when both sides vanish
};

/// Both sides of the residue identity at N = 2 and g = 0.
ResidueReport residue_side_check(int k, const std::vector<Rational>& lambdas, double tol,
                                 const QuadOptions& options = {});

}  // namespace kmm
