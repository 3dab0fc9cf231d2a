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

#include "kmm/rational.hpp"

#include <cctype>

namespace kmm {

std::string to_string(const Rational& q) { return q.get_str(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational out;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw DomainError("malformed rational '" + std::string(text) + "'");
    }
    Integer d{std::string(den)};
    if (d == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    out = Rational(Integer(std::string(num)), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto ip = s.substr(0, dot);
    auto fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
        (!fp.empty() && !all_digits(fp))) {
      throw DomainError("malformed decimal '" + std::string(text) + "'");
    }
    Integer whole(ip.empty() ? std::string("0") : std::string(ip));
    Integer frac(fp.empty() ? std::string("0") : std::string(fp));
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
    out = Rational(whole * scale + frac, scale);
  } else {
    if (!all_digits(s)) throw DomainError("malformed rational '" + std::string(text) + "'");
    out = Rational(Integer(std::string(s)));
  }
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                    : comma - start);
    out.push_back(parse_rational(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Rational factorial(int n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f);
}

Rational primitive_scale(const std::vector<Rational>& values) {
  Integer den_lcm = 1;
  for (const auto& v : values) {
    if (v != 0) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v.get_den_mpz_t());
  }
  Integer num_gcd = 0;
  for (const auto& v : values) {
    if (v == 0) continue;
    Rational scaled = v * den_lcm;
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_num_mpz_t());
  }
  if (num_gcd == 0) return Rational(1);
  Rational s(den_lcm, num_gcd);
  s.canonicalize();
  return s;
}

}  // namespace kmm
