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

#include "kmm/relations.hpp"

#include <omp.h>

#include <map>
#include <sstream>
#include <tuple>

namespace kmm {

std::string family_name(Family f) {
  switch (f) {
    case Family::C: return "C";
    case Family::B: return "B";
    case Family::BKP: return "BKP";
    case Family::NEW: return "NEW";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "C") return Family::C;
  if (name == "B") return Family::B;
  if (name == "BKP") return Family::BKP;
  if (name == "NEW") return Family::NEW;
  throw DomainError("unknown relation family '" + std::string(name) + "'");
}

namespace {

void require_order(int n) {
  if (n < 0) throw DomainError("relation order must be non-negative");
}

MomentExpr linear_from(const TracePoly& poly, int order) {
  MomentExpr e(order);
  for (const auto& [key, c] : poly.terms()) {
    if (key.first.length() % 2 == 0) e.add_linear(key.first, c);
  }
  return e;
}

/// Groups per-source expressions that agree up to scale.
class RelationCollector {
 public:
  explicit RelationCollector(int order) : order_(order) {}

  void add(const MomentExpr& e, Provenance source) {
    if (e.is_zero()) return;
    auto [prim, scale] = e.normalized();
    source.scale = scale;
    for (auto& r : relations_) {
      if (r.expr == prim) {
        r.provenance.push_back(std::move(source));
        return;
      }
    }
    Relation r;
    r.expr = std::move(prim);
    r.provenance.push_back(std::move(source));
    relations_.push_back(std::move(r));
  }

  std::vector<Relation> finish() {
    for (auto& r : relations_) {
      Series block(order_);
      for (const auto& p : r.provenance) block.add_term(p.monomial, p.scale);
      if (block.is_zero()) continue;
      std::vector<Rational> coeffs;
      for (const auto& [m, c] : block.terms()) coeffs.push_back(c);
      Rational s = primitive_scale(coeffs);
      if (block.terms().rbegin()->second < 0) s = -s;
      r.block_polynomial = block * s;
      r.block_scale = Rational(1) / s;
    }
    return std::move(relations_);
  }

 private:
  int order_;
  std::vector<Relation> relations_;
};

std::vector<Relation> collect_by_monomial(const std::map<Multidegree, MomentExpr>& sectors,
                                          int order, int (*index_of)(const Multidegree&)) {
  RelationCollector collector(order);
  // largest monomial first, as the tables list them
  for (auto it = sectors.rbegin(); it != sectors.rend(); ++it) {
    Provenance p;
    p.monomial = it->first;
    p.index = index_of ? index_of(it->first) : 0;
    p.label = it->first.to_string();
    collector.add(it->second, std::move(p));
  }
  return collector.finish();
}

struct BracketTerm {
  OddPartition partition;
  Multidegree monomial;
  Rational coeff;
};

/// <q_k(H~) q_m(sH/2) q_r(tH/2)> as moment-symbol terms, dropping odd-length
/// partitions (their moments vanish for an even potential).
std::vector<BracketTerm> bracket(int k, int m, int r) {
  TracePoly p = q_on_traces(k) * q_on_scaled_traces(m, Alphabet::s) *
                q_on_scaled_traces(r, Alphabet::t);
  std::vector<BracketTerm> out;
  for (const auto& [key, c] : p.terms()) {
    if (key.first.length() % 2) continue;
    out.push_back({key.first, key.second, c});
  }
  return out;
}

void add_sector(std::map<Multidegree, MomentExpr>& sectors, const Multidegree& m, int order,
                const OddPartition& a, const OddPartition& b, const Rational& c) {
  auto [it, inserted] = sectors.try_emplace(m, MomentExpr(order));
  it->second.add_product(a, b, c);
}

void merge_sectors(std::map<Multidegree, MomentExpr>& into,
                   const std::map<Multidegree, MomentExpr>& from) {
  for (const auto& [m, e] : from) {
    auto [it, inserted] = into.try_emplace(m, e);
    if (!inserted) it->second += e;
  }
}

void drop_zero(std::map<Multidegree, MomentExpr>& sectors) {
  std::erase_if(sectors, [](const auto& kv) { return kv.second.is_zero(); });
}

int half_t_weight(const Multidegree& m) { return m.weight(Alphabet::t) / 2; }

}  // namespace

RelationSet gen_linear_C(int n) {
  require_order(n);
  RelationSet set;
  set.family = Family::C;
  set.order = n;
  if (n < 2 || n % 2) return set;

  const MomentExpr lhs = linear_from(q_on_traces(n), n);
  std::vector<MomentExpr> chain{lhs};
  for (int m = 1; m < n; m += 2) {
    TracePoly insertion;
    insertion.add_term(OddPartition{m}, Multidegree{}, 1);
    chain.push_back(linear_from(insertion * q_on_traces(n - m), n));
  }

  std::vector<Rational> all;
  for (const auto& e : chain) {
    for (const auto& [p, c] : e.linear()) all.push_back(c);
  }
  set.chain_scale = primitive_scale(all);
  for (auto& e : chain) e *= set.chain_scale;

  RelationCollector collector(n);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    Provenance p;
    p.index = static_cast<int>(2 * i - 1);
    p.label = "m=" + std::to_string(p.index);
    collector.add(chain.front() - chain[i], std::move(p));
  }
  set.relations = collector.finish();
  set.chain = std::move(chain);
  return set;
}

RelationSet gen_linear_B(int n) {
  require_order(n);
  RelationSet set;
  set.family = Family::B;
  set.order = n;
  std::map<Multidegree, MomentExpr> sectors;
  for (int k = 1; k <= n; ++k) {
    const Series qk = q_poly(k, n, Alphabet::t);
    const TracePoly br = q_on_traces(k) * q_on_scaled_traces(n - k, Alphabet::t);
    const Rational sign = (k % 2) ? -1 : 1;
    for (const auto& [mq, cq] : qk.terms()) {
      for (const auto& [key, cb] : br.terms()) {
        if (key.first.length() % 2) continue;
        add_sector(sectors, mq * key.second, n, key.first, OddPartition{}, sign * cq * cb);
      }
    }
  }
  drop_zero(sectors);
  set.relations = collect_by_monomial(sectors, n, nullptr);
  return set;
}

RelationSet gen_bkp(int n) {
  require_order(n);
  RelationSet set;
  set.family = Family::BKP;
  set.order = n;
  if (n < 1) return set;

  std::map<std::tuple<int, int, int>, std::vector<BracketTerm>> brackets;
  for (int k = 0; k <= n; ++k) {
    for (int m = 0; k + m <= n; ++m) {
      for (int r = 0; k + m + r <= n; ++r) brackets[{k, m, r}] = bracket(k, m, r);
    }
  }

  // one sector map per value of k+l, merged in order afterwards
  std::vector<std::map<Multidegree, MomentExpr>> partial(static_cast<std::size_t>(n) + 1);
#pragma omp parallel for schedule(dynamic)
  for (int kl = 1; kl <= n; ++kl) {
    auto& sectors = partial[static_cast<std::size_t>(kl)];
    const Series q = q_poly(kl, n, Alphabet::s);
    const int rest = n - kl;
    for (int k = 0; k <= kl; ++k) {
      const int l = kl - k;
      for (int m = 0; m <= rest; ++m) {
        for (int nn = 0; m + nn <= rest; ++nn) {
          for (int r = 0; m + nn + r <= rest; ++r) {
            const int s = rest - m - nn - r;
            const Rational sign = ((k + nn) % 2) ? -1 : 1;
            const auto& b1 = brackets.at({k, m, r});
            const auto& b2 = brackets.at({l, nn, s});
            if (b1.empty() || b2.empty()) continue;
            for (const auto& [mq, cq] : q.terms()) {
              for (const auto& t1 : b1) {
                const Multidegree m1 = mq * t1.monomial;
                const Rational c1 = sign * cq * t1.coeff;
                for (const auto& t2 : b2) {
                  add_sector(sectors, m1 * t2.monomial, n, t1.partition, t2.partition,
                             c1 * t2.coeff);
                }
              }
            }
          }
        }
      }
    }
  }
  std::map<Multidegree, MomentExpr> sectors;
  for (const auto& p : partial) merge_sectors(sectors, p);
  drop_zero(sectors);
  set.relations = collect_by_monomial(sectors, n, nullptr);
  return set;
}

RelationSet gen_new(int n) {
  require_order(n);
  RelationSet set;
  set.family = Family::NEW;
  set.order = n;
  std::map<Multidegree, MomentExpr> sectors;
  for (int r = 1; 2 * r <= n - 6; ++r) {
    const int top = n - 2 * r;
    for (int k = 1; k <= top; ++k) {
      const Series qk = q_poly(k, n, Alphabet::s);
      const auto br = bracket(k, top - k, 2 * r);
      const Rational sign = (k % 2) ? -1 : 1;
      for (const auto& [mq, cq] : qk.terms()) {
        for (const auto& t : br) {
          add_sector(sectors, mq * t.monomial, n, t.partition, OddPartition{},
                     sign * cq * t.coeff);
        }
      }
    }
  }
  drop_zero(sectors);
  set.relations = collect_by_monomial(sectors, n, &half_t_weight);
  for (auto& rel : set.relations) {
    for (auto& p : rel.provenance) p.label = "r=" + std::to_string(p.index) + ": " + p.label;
  }
  return set;
}

RelationSet generate(Family family, int n) {
  switch (family) {
    case Family::C: return gen_linear_C(n);
    case Family::B: return gen_linear_B(n);
    case Family::BKP: return gen_bkp(n);
    case Family::NEW: return gen_new(n);
  }
  throw DomainError("unknown family");
}

std::vector<MomentExpr> linear_relations(int n) {
  std::vector<MomentExpr> out;
  for (const auto& r : gen_linear_B(n).relations) out.push_back(r.expr);
  for (const auto& r : gen_linear_C(n).relations) out.push_back(r.expr);
  return out;
}

VerifyReport verify(const MomentExpr& expr, WickEngine& engine, int g_order) {
  GSeries residual(g_order);
  for (const auto& [p, c] : expr.linear()) residual += engine.moment(p, g_order) * c;
  for (const auto& [pair, c] : expr.quadratic()) {
    residual += engine.moment(pair.first, g_order) * engine.moment(pair.second, g_order) * c;
  }
  VerifyReport report;
  report.expr = expr;
  report.holds = residual.is_zero();
  report.residual = std::move(residual);
  return report;
}

std::string render(const RelationSet& set) {
  std::ostringstream out;
  out << "family " << family_name(set.family) << ", order " << set.order << ": "
      << set.relations.size() << " relation(s)\n";
  if (!set.chain.empty()) {
    out << "  chain (scaled by " << to_string(set.chain_scale) << "):\n";
    for (std::size_t i = 0; i < set.chain.size(); ++i) {
      out << (i == 0 ? "      " : "    = ") << set.chain[i].to_string() << '\n';
    }
  }
  for (const auto& r : set.relations) {
    out << "  0 = " << r.expr.to_string() << '\n';
    if (!r.block_polynomial.is_zero()) {
      out << "      block: " << to_string(r.block_scale) << " * ("
          << r.block_polynomial.to_string() << ")\n";
    }
    out << "      from:";
    for (const auto& p : r.provenance) out << " [" << p.label << "]";
    out << '\n';
  }
  return out.str();
}

}  // namespace kmm
