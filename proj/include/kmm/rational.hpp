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

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kmm {

/// Exact rational scalar used by every algebraic module.
using Rational = mpq_class;
using Integer = mpz_class;

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the input was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured resource limit would be exceeded; nothing was computed.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, double estimated_cost)
      : Error(what), estimated_cost_(estimated_cost) {}
  double estimated_cost() const { return estimated_cost_; }

 private:
  double estimated_cost_;
};

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// Accepts "p", "p/q", "-p/q" and finite decimals such as "1.25" (read exactly).
Rational parse_rational(std::string_view text);

/// Comma separated list of rationals.
std::vector<Rational> parse_rational_list(std::string_view text);

Rational factorial(int n);

/// Least common multiple of denominators divided by gcd of numerators, so that
/// multiplying every value by the result gives coprime integers.
Rational primitive_scale(const std::vector<Rational>& values);

}  // namespace kmm
