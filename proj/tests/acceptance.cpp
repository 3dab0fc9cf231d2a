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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "kmm/cli.hpp"
#include "kmm/json_io.hpp"
#include "oracles.hpp"

using namespace kmm;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!note.empty()) note += "; ";
      note += what;
    }
  }
};

Json run_cli(const std::vector<std::string>& args, int* code = nullptr) {
  std::ostringstream out, err;
  const int c = cli::run(args, out, err);
  if (code) *code = c;
  if (c != 0 && c != 1) throw std::runtime_error("kmm " + args.front() + " exited with " + std::to_string(c) + ": " + err.str());
  return Json::parse(out.str());
}

MomentExpr lin(int order, std::vector<std::pair<Rational, OddPartition>> terms) {
  MomentExpr e(order);
  for (const auto& [c, p] : terms) e.add_linear(p, c);
  return e;
}

MomentExpr product(const MomentExpr& a, const MomentExpr& b) {
  MomentExpr out(a.order() + b.order());
  for (const auto& [p, c] : a.linear()) {
    for (const auto& [q, d] : b.linear()) out.add_product(p, q, c * d);
  }
  return out;
}

bool proportional(const MomentExpr& a, const MomentExpr& b) {
  return !a.is_zero() && a.normalized().first == b.normalized().first;
}

const OddPartition P11{1, 1}, P31{3, 1}, P14{1, 1, 1, 1}, P51{5, 1}, P33{3, 3}, P313{3, 1, 1, 1},
    P16{1, 1, 1, 1, 1, 1};

MomentExpr B6() { return lin(6, {{9, P51}, {-5, P33}, {-5, P313}, {1, P16}}); }
MomentExpr B8() {
  return lin(8, {{90, {7, 1}}, {-42, {5, 3}}, {-21, {5, 1, 1, 1}}, {-35, {3, 3, 1, 1}},
                 {7, {3, 1, 1, 1, 1, 1}}, {1, {1, 1, 1, 1, 1, 1, 1, 1}}});
}
MomentExpr NEW8() {
  return lin(8, {{9, {5, 1, 1, 1}}, {-5, {3, 3, 1, 1}}, {-5, {3, 1, 1, 1, 1, 1}}, {1, {1, 1, 1, 1, 1, 1, 1, 1}}});
}
MomentExpr C6a() { return lin(6, {{9, P51}, {5, P33}, {-10, P313}, {-4, P16}}); }

Outcome golden_c() {
  Outcome o;
  const std::map<int, std::vector<std::string>> golden = {
      {4, {"2M_{3,1} + M_{1^4}", "M_{3,1} + 2M_{1^4}", "3M_{3,1}"}},
      {6, {"18M_{5,1} + 5M_{3^2} + 20M_{3,1^3} + 2M_{1^6}", "9M_{5,1} + 30M_{3,1^3} + 6M_{1^6}",
           "15M_{3^2} + 30M_{3,1^3}", "45M_{5,1}"}},
      {8, {"90M_{7,1} + 42M_{5,3} + 84M_{5,1^3} + 70M_{3^2,1^2} + 28M_{3,1^5} + M_{1^8}",
           "45M_{7,1} + 126M_{5,1^3} + 70M_{3^2,1^2} + 70M_{3,1^5} + 4M_{1^8}",
           "63M_{5,3} + 210M_{3^2,1^2} + 42M_{3,1^5}", "105M_{5,3} + 210M_{5,1^3}", "315M_{7,1}"}},
  };
  for (const auto& [n, lines] : golden) {
    Json doc = run_cli({"gen", "--family", "C", "--order", std::to_string(n)});
    std::vector<std::string> got;
    for (const auto& c : doc["chain"]) got.push_back(c["text"].get<std::string>());
    o.require(got == lines, "order " + std::to_string(n) + " chain differs");
  }
  return o;
}

Outcome golden_b() {
  Outcome o;
  struct Case {
    int n;
    MomentExpr expr;
    Rational scale;
    std::string poly;
  };
  const std::vector<Case> cases = {
      {6, B6(), Rational(-8, 2025), "45 t_5 t_1 - 45 t_3^2 - 15 t_3 t_1^3 + t_1^6"},
      {8, B8(), Rational(-4, 99225),
       "630 t_7 t_1 - 630 t_5 t_3 - 105 t_5 t_1^3 - 315 t_3^2 t_1^2 + 21 t_3 t_1^5 + t_1^8"},
  };
  for (const auto& c : cases) {
    Json doc = run_cli({"gen", "--family", "B", "--order", std::to_string(c.n)});
    const auto& rels = doc["relations"];
    o.require(rels.size() == 1, "order " + std::to_string(c.n) + ": expected one relation");
    if (rels.size() != 1) continue;
    o.require(proportional(moment_expr_from_json(rels[0]), c.expr), "order " + std::to_string(c.n) + " combination");
    o.require(rational_from_json(rels[0]["block_scale"]) == c.scale, "order " + std::to_string(c.n) + " prefactor");
    o.require(series_from_json(rels[0]["block_polynomial"]).to_string() == c.poly,
              "order " + std::to_string(c.n) + " t-polynomial");
    for (const auto& src : doc["provenance"][0]) {
      o.require(rational_from_json(src["scale"]) != 0, "empty provenance");
    }
  }
  return o;
}

Outcome golden_bkp() {
  Outcome o;
  const MomentExpr pair = product(lin(4, {{2, P31}, {1, P14}}), lin(4, {{1, P31}, {-1, P14}}));
  const MomentExpr m11 = lin(2, {{1, P11}});
  struct Case {
    int n;
    MomentExpr brace;
    Rational scale;
    std::string poly;
  };
  const std::vector<Case> cases = {
      {6, B6() - 15 * product(m11, lin(4, {{1, P31}, {-1, P14}})), Rational(-16, 2025),
       "45 s_5 s_1 - 45 s_3^2 - 15 s_3 s_1^3 + s_1^6"},
      {8, B8() - 7 * product(m11, C6a()) - 35 * pair, Rational(-8, 99225),
       "630 s_7 s_1 - 630 s_5 s_3 - 105 s_5 s_1^3 - 315 s_3^2 s_1^2 + 21 s_3 s_1^5 + s_1^8"},
      {8, NEW8() - product(m11, C6a()) + 5 * pair, Rational(-8, 2025),
       "45 s_5 s_1 t_1^2 - 45 s_3^2 t_1^2 - 15 s_3 s_1^3 t_1^2 + s_1^6 t_1^2"},
  };
  std::map<int, Json> docs;
  for (int n : {6, 8}) docs[n] = run_cli({"gen", "--family", "BKP", "--order", std::to_string(n)});
  o.require(docs[6]["relations"].size() == 1 && docs[8]["relations"].size() == 2, "relation counts");
  for (const auto& c : cases) {
    bool found = false;
    for (const auto& rel : docs[c.n]["relations"]) {
      if (!proportional(moment_expr_from_json(rel), c.brace)) continue;
      found = true;
      o.require(rational_from_json(rel["block_scale"]) == c.scale, c.poly + ": prefactor");
      o.require(series_from_json(rel["block_polynomial"]).to_string() == c.poly, c.poly + ": polynomial");
    }
    o.require(found, "missing brace for " + c.poly);
  }
  return o;
}

Outcome verify_all(const std::vector<MomentExpr>& exprs, std::vector<int> sizes, int seeds,
                   std::vector<int> g_orders, int cap) {
  Outcome o;
  for (int N : sizes) {
    for (int s = 0; s < seeds; ++s) {
      WickEngine engine(ExternalField::random(N, 1000 + 17 * static_cast<std::uint64_t>(s)), WickOptions{cap, true});
      for (const auto& e : exprs) {
        for (int g : g_orders) {
          auto rep = verify(e, engine, g);
          o.require(rep.holds, e.to_string() + " at N=" + std::to_string(N) + " g-order " + std::to_string(g) +
                                   ": residual " + rep.residual.to_string());
        }
      }
    }
  }
  return o;
}

Outcome low_order_linear() {
  const std::vector<MomentExpr> exprs = {
      lin(4, {{1, P14}, {-1, P31}}),
      lin(6, {{1, P16}, {Rational(3, 2), P51}, {Rational(-5, 2), P33}}),
      lin(6, {{1, P313}, {Rational(-3, 2), P51}, {Rational(1, 2), P33}}),
  };
  return verify_all(exprs, {2, 4}, 3, {0, 1, 2}, 14);
}

Outcome order8_c() {
  std::vector<MomentExpr> exprs;
  for (const auto& r : gen_linear_C(8).relations) exprs.push_back(r.expr);
  return verify_all(exprs, {2, 4}, 2, {0, 1}, 12);
}

Outcome order6_bkp() {
  std::vector<MomentExpr> exprs;
  for (const auto& r : gen_bkp(6).relations) exprs.push_back(r.expr);
  return verify_all(exprs, {2, 4}, 3, {0}, 12);
}

Outcome reduction() {
  Outcome o;
  ReductionReport r8 = reduce_quadratic(8);
  int fresh = 0;
  for (const auto& c : r8.certificates) {
    fresh += c.is_new;
    o.require(certificate_sound(r8, c), "unsound certificate for " + c.source);
  }
  o.require(fresh == 1 && r8.reduced_relations.size() == 1, "expected exactly one new relation at order 8");
  if (!r8.reduced_relations.empty()) {
    o.require(proportional(r8.reduced_relations[0], NEW8()), "order-8 relation differs");
  }
  Json doc = run_cli({"reduce", "--order", "8"});
  o.require(doc["reduced_relations"].size() == 1, "CLI order 8");
  Json ten = run_cli({"reduce", "--order", "10"});
  o.require(ten["fully_linearizable"] == true, "order 10 not fully linearized");
  ReductionReport r10 = reduce_quadratic(10);
  for (const auto& c : r10.certificates) o.require(certificate_sound(r10, c), "order 10 certificate");
  o.note += (o.note.empty() ? "" : "; ") + std::string("order 10 adds ") +
            std::to_string(r10.reduced_relations.size()) + " linear relations";
  return o;
}

Outcome normalization() {
  Outcome o;
  std::ostringstream note;
  for (const auto& l : std::vector<std::vector<double>>{{1, 2}, {1, 2, 3, 5}}) {
    ZReport z = z_eval(l, 0, 1e-9);
    o.require(std::abs(z.value - 1) < 1e-6, "Z = " + std::to_string(z.value));
    note << "N=" << z.N << ": |Z-1| = " << std::abs(z.value - 1) << "  ";
  }
  if (o.pass) o.note = note.str();
  return o;
}

Outcome property_suites() {
  Outcome o;
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 * static_cast<int>(1 + rng() % 4);
    std::vector<Rational> xs;
    while (static_cast<int>(xs.size()) < n) {
      Rational x = oracle::random_rational(rng, 50);
      if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
    }
    o.require(product_identity_check(xs), "product identity");
  }
  for (int n = 0; n <= 8; n += 2) {
    AntisymMatrix<Rational> a(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) a.set(i, j, oracle::random_signed(rng, 20));
    }
    const Rational pf = pfaffian(a);
    o.require(pf * pf == oracle::det(oracle::dense(a)), "Pf^2 = det at size " + std::to_string(n));
  }
  for (int m = 1; m <= 10; ++m) {
    Series sum(10);
    for (int j = 0; j <= m; ++j) {
      Series term = mul(q_poly(m - j), q_poly(j));
      sum += j % 2 ? -term : term;
    }
    o.require(sum.is_zero(), "q convolution at weight " + std::to_string(m));
  }
  const Rational lam(9, 4);
  const ExternalField one({lam});
  for (int m = 1; m <= 6; ++m) {
    Rational expected = oracle::double_factorial(2 * m - 1);
    for (int k = 0; k < m; ++k) expected /= lam;
    o.require(gaussian_trace_moment(std::vector<int>{2 * m}, one) == expected, "N=1 closed form");
  }
  const oracle::GaussHermite gh(8);
  const ExternalField two({Rational(3, 2), Rational(5, 7)});
  const double l1 = 1.5, l2 = 5.0 / 7;
  for (const auto& key : std::vector<std::vector<int>>{{2}, {1, 1}, {4}, {3, 1}, {2, 2}, {6}, {3, 3}, {5, 1}, {1, 1, 1, 1, 1, 1}}) {
    const double numeric = gh.expectation(1 / l1, [&](double a) {
      return gh.expectation(1 / l2, [&](double d) {
        return gh.expectation(1 / (l1 + l2), [&](double b) {
          return gh.expectation(1 / (l1 + l2), [&](double c) {
            double p = 1;
            for (int k : key) p *= oracle::trace_power(a, b, c, d, k);
            return p;
          });
        });
      });
    });
    const double exact = gaussian_trace_moment(key, two).get_d();
    o.require(std::abs(exact - numeric) <= 1e-9 * std::max(1.0, std::abs(exact)), "N=2 quadrature oracle");
  }
  return o;
}

Outcome residue_ratio() {
  Outcome o;
  std::vector<double> ratios;
  for (int k : {2, 4}) {
    for (const auto& l : std::vector<std::vector<Rational>>{{Rational(1), Rational(2)},
                                                             {Rational(3), Rational(7, 2)},
                                                             {Rational(1, 5), Rational(9, 4)}}) {
      ResidueReport a = residue_side_check(k, l, 1e-10);
      ResidueReport b = residue_side_check(k, l, 1e-10);
      o.require(std::isfinite(a.ratio), "non-finite ratio");
      o.require(a.ratio == b.ratio, "ratio not reproducible");
      ratios.push_back(a.ratio);
    }
  }
  for (double r : ratios) o.require(std::abs(r - ratios.front()) < 1e-6, "ratio varies");
  std::ostringstream note;
  note.precision(12);
  note << "LHS/RHS = " << ratios.front();
  o.note = o.note.empty() ? note.str() : o.note + "; " + note.str();
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "family C chains at orders 4, 6, 8", golden_c},
      {2, "family B combinations, prefactors and t-polynomials", golden_b},
      {3, "quadratic relations at orders 6 and 8 with block prefactors", golden_bkp},
      {4, "orders 4 and 6 linear relations, N in {2,4}, 3 fields, g-orders 0-2", low_order_linear},
      {5, "order-8 family C, N in {2,4}, g-orders 0-1", order8_c},
      {6, "order-6 quadratic relation, N in {2,4}, g-order 0", order6_bkp},
      {7, "reduction: one new relation at order 8, order 10 linearizes", reduction},
      {8, "Z = 1 at g = 0 for N = 2 and N = 4", normalization},
      {9, "Pfaffian, q-function and Gaussian moment property suites", property_suites},
      {10, "residue identity ratio constant across k and fields", residue_ratio},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += o.pass ? 0 : 1;
    std::printf("%s criterion %2d: %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                o.note.empty() ? "" : " -- ", o.note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
