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

#include "kmm/reduce.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace kmm {

Basis::Basis(int order) : order_(order) {
  std::set<SymbolPair> pairs;
  for (int wa = 2; wa + 2 <= order; wa += 2) {
    for (const auto& a : even_length_partitions(wa)) {
      for (const auto& b : even_length_partitions(order - wa)) pairs.emplace(a, b);
    }
  }
  quadratic_.assign(pairs.begin(), pairs.end());
  linear_ = even_length_partitions(order);
  for (std::size_t i = 0; i < quadratic_.size(); ++i) {
    quadratic_index_.emplace(quadratic_[i], static_cast<int>(i));
  }
  for (std::size_t i = 0; i < linear_.size(); ++i) {
    linear_index_.emplace(linear_[i], static_cast<int>(quadratic_.size() + i));
  }
}

SparseVector Basis::embed(const MomentExpr& e) const {
  if (!e.is_zero() && e.order() != order_) {
    throw DomainError("expression of order " + std::to_string(e.order()) +
                      " embedded in basis of order " + std::to_string(order_));
  }
  SparseVector v;
  for (const auto& [p, c] : e.quadratic()) {
    auto it = quadratic_index_.find(p);
    if (it == quadratic_index_.end()) {
      throw DomainError("symbol " + p.first.symbol() + p.second.symbol() + " not in basis");
    }
    v[it->second] = c;
  }
  for (const auto& [p, c] : e.linear()) {
    auto it = linear_index_.find(p);
    if (it == linear_index_.end()) throw DomainError("symbol " + p.symbol() + " not in basis");
    v[it->second] = c;
  }
  return v;
}

MomentExpr Basis::expr(const SparseVector& v) const {
  MomentExpr e(order_);
  for (const auto& [col, c] : v) {
    if (is_quadratic_column(col)) {
      const auto& p = quadratic_[static_cast<std::size_t>(col)];
      e.add_product(p.first, p.second, c);
    } else {
      e.add_linear(linear_[static_cast<std::size_t>(col) - quadratic_.size()], c);
    }
  }
  return e;
}

namespace {

/// y += a * x
void axpy(SparseVector& y, const Rational& a, const SparseVector& x) {
  for (const auto& [k, v] : x) {
    auto [it, inserted] = y.try_emplace(k, a * v);
    if (!inserted) {
      it->second += a * v;
      if (it->second == 0) y.erase(it);
    }
  }
}

bool better_pivot(const Rational& a, const Rational& b) {
  // smaller denominator, then smaller numerator magnitude
  if (int c = cmp(a.get_den(), b.get_den()); c != 0) return c < 0;
  return mpz_cmpabs(a.get_num().get_mpz_t(), b.get_num().get_mpz_t()) < 0;
}

}  // namespace

Echelon::Echelon(std::size_t columns, const std::vector<SparseVector>& input,
                 PivotStrategy strategy) {
  struct Work {
    SparseVector values;
    SparseVector combination;
    bool used = false;
  };
  std::vector<Work> work;
  work.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    work.push_back({input[i], SparseVector{{static_cast<int>(i), Rational(1)}}, false});
  }
  for (std::size_t col = 0; col < columns; ++col) {
    const int c = static_cast<int>(col);
    std::ptrdiff_t best = -1;
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (work[i].used) continue;
      auto it = work[i].values.find(c);
      if (it == work[i].values.end()) continue;
      if (best < 0) {
        best = static_cast<std::ptrdiff_t>(i);
        if (strategy == PivotStrategy::FirstRow) break;
        continue;
      }
      if (better_pivot(it->second, work[static_cast<std::size_t>(best)].values.at(c))) {
        best = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (best < 0) continue;
    auto& pivot = work[static_cast<std::size_t>(best)];
    pivot.used = true;
    const Rational pv = pivot.values.at(c);
    for (auto& w : work) {
      if (w.used) continue;
      auto it = w.values.find(c);
      if (it == w.values.end()) continue;
      const Rational f = -(it->second / pv);
      axpy(w.values, f, pivot.values);
      axpy(w.combination, f, pivot.combination);
    }
    rows_.push_back({c, pivot.values, pivot.combination});
  }
}

Echelon::Reduction Echelon::reduce(SparseVector target, int column_limit) const {
  Reduction out;
  for (const auto& row : rows_) {
    if (column_limit >= 0 && row.pivot >= column_limit) break;
    auto it = target.find(row.pivot);
    if (it == target.end()) continue;
    const Rational f = it->second / row.values.at(row.pivot);
    axpy(target, -f, row.values);
    axpy(out.combination, f, row.combination);
  }
  out.remainder = std::move(target);
  return out;
}

Span build_span(int n, const std::map<int, std::vector<MomentExpr>>& extra,
                const ReduceOptions& options) {
  if (n < 2 || n % 2) throw DomainError("reduction order must be even and at least 2");
  Span span{Basis(n), {}};
  if (span.basis.size() > options.basis_cap) {
    throw CapExceeded("basis of order " + std::to_string(n) + " has " +
                          std::to_string(span.basis.size()) + " symbols, above the cap " +
                          std::to_string(options.basis_cap),
                      static_cast<double>(span.basis.size()));
  }
  for (int w = 2; w <= n; w += 2) {
    std::vector<Generator> inputs;
    auto take = [&](const RelationSet& set) {
      for (std::size_t i = 0; i < set.relations.size(); ++i) {
        inputs.push_back({set.relations[i].expr, family_name(set.family) + "(" +
                                                     std::to_string(w) + ")#" +
                                                     std::to_string(i + 1)});
      }
    };
    take(gen_linear_B(w));
    take(gen_linear_C(w));
    if (w < n) {
      if (auto it = extra.find(w); it != extra.end()) {
        for (std::size_t i = 0; i < it->second.size(); ++i) {
          inputs.push_back({it->second[i], "X(" + std::to_string(w) + ")#" + std::to_string(i + 1)});
        }
      }
    }
    if (w == n) {
      for (auto& g : inputs) span.generators.push_back(std::move(g));
      continue;
    }
    for (const auto& rho : even_length_partitions(n - w)) {
      for (const auto& g : inputs) {
        span.generators.push_back({g.expr.times_symbol(rho), g.label + "*" + rho.symbol()});
      }
    }
  }
  return span;
}

namespace {

std::vector<SparseVector> embed_all(const Basis& basis, const std::vector<MomentExpr>& exprs) {
  std::vector<SparseVector> out;
  for (const auto& e : exprs) out.push_back(basis.embed(e));
  return out;
}

std::size_t rank_of(const Basis& basis, const std::vector<MomentExpr>& exprs) {
  return Echelon(basis.size(), embed_all(basis, exprs), PivotStrategy::FirstRow).rank();
}

std::vector<MomentExpr> order_linear_inputs(const Span& span) {
  std::vector<MomentExpr> out;
  for (const auto& g : span.generators) {
    if (g.expr.is_linear()) out.push_back(g.expr);
  }
  return out;
}

std::string provenance_label(const Relation& r) {
  std::string out;
  for (const auto& p : r.provenance) {
    if (!out.empty()) out += "; ";
    out += p.label;
  }
  return out;
}

}  // namespace

ReductionReport reduce_quadratic(int n, const std::map<int, std::vector<MomentExpr>>& extra,
                                 const ReduceOptions& options) {
  ReductionReport report;
  report.order = n;
  report.span = build_span(n, extra, options);
  const Basis& basis = report.span.basis;

  std::vector<MomentExpr> gen_exprs;
  for (const auto& g : report.span.generators) gen_exprs.push_back(g.expr);
  const Echelon full(basis.size(), embed_all(basis, gen_exprs), options.pivot);
  report.span_dimension = full.rank();

  std::vector<MomentExpr> linear = order_linear_inputs(report.span);
  report.linear_dimension = rank_of(basis, linear);

  const int quadratic_columns = static_cast<int>(basis.quadratic_size());
  const RelationSet bkp = gen_bkp(n);
  for (const auto& rel : bkp.relations) {
    Certificate cert;
    cert.relation = rel.expr;
    cert.source = provenance_label(rel);
    auto red = full.reduce(basis.embed(rel.expr), quadratic_columns);
    cert.combination = std::move(red.combination);
    cert.linearizable = std::none_of(red.remainder.begin(), red.remainder.end(), [&](const auto& kv) {
      return basis.is_quadratic_column(kv.first);
    });
    cert.residue = basis.expr(red.remainder);
    if (!cert.linearizable) {
      report.is_fully_linearizable = false;
    } else if (!cert.residue.is_zero()) {
      std::vector<MomentExpr> known = linear;
      known.insert(known.end(), report.reduced_relations.begin(), report.reduced_relations.end());
      const Echelon ech(basis.size(), embed_all(basis, known), PivotStrategy::FirstRow);
      if (!ech.reduce(basis.embed(cert.residue)).remainder.empty()) {
        cert.is_new = true;
        report.reduced_relations.push_back(cert.residue.normalized().first);
      }
    }
    report.certificates.push_back(std::move(cert));
  }
  return report;
}

ReductionReport reduce_quadratic(int n, const ReduceOptions& options) {
  if (n < 6 || n % 2) throw DomainError("quadratic reduction needs an even order >= 6");
  std::map<int, std::vector<MomentExpr>> extra;
  for (int m = 6; m < n; m += 2) {
    ReductionReport lower = reduce_quadratic(m, extra, options);
    auto& slot = extra[m];
    slot = lower.reduced_relations;
    if (options.lower == LowerInputs::ResiduesAndNewFamily) {
      for (const auto& r : gen_new(m).relations) slot.push_back(r.expr);
    }
  }
  return reduce_quadratic(n, extra, options);
}

bool certificate_sound(const ReductionReport& report, const Certificate& cert) {
  MomentExpr sum = cert.residue;
  for (const auto& [g, c] : cert.combination) {
    sum += report.span.generators.at(static_cast<std::size_t>(g)).expr * c;
  }
  return sum == cert.relation;
}

ProbeSummary probe_open_question(int n_max, const ReduceOptions& options) {
  if (n_max < 8 || n_max % 2) throw DomainError("probe needs an even n_max >= 8");
  ProbeSummary summary;
  summary.n_max = n_max;
  ReduceOptions opts = options;
  opts.lower = LowerInputs::ResiduesAndNewFamily;
  std::map<int, std::vector<MomentExpr>> extra;
  for (int n = 6; n <= n_max; n += 2) {
    ReductionReport report = reduce_quadratic(n, extra, opts);
    RelationSet fam = gen_new(n);
    auto& slot = extra[n];
    slot = report.reduced_relations;
    for (const auto& r : fam.relations) slot.push_back(r.expr);
    if (n < 8) continue;

    ProbeStep step;
    step.order = n;
    const Basis& basis = report.span.basis;
    std::vector<MomentExpr> linear = order_linear_inputs(report.span);
    std::vector<MomentExpr> fam_exprs;
    for (const auto& r : fam.relations) fam_exprs.push_back(r.expr);
    auto with = [&](std::vector<MomentExpr> base, const std::vector<MomentExpr>& more) {
      base.insert(base.end(), more.begin(), more.end());
      return rank_of(basis, base);
    };
    step.linear_rank = rank_of(basis, linear);
    step.rank_with_residues = with(linear, report.reduced_relations);
    step.rank_with_new_family = with(linear, fam_exprs);
    auto both = fam_exprs;
    both.insert(both.end(), report.reduced_relations.begin(), report.reduced_relations.end());
    step.rank_with_both = with(linear, both);
    step.residues_explained_by_new_family = step.rank_with_both == step.rank_with_new_family;
    step.new_family_explained_by_residues = step.rank_with_both == step.rank_with_residues;
    summary.all_linearizable = summary.all_linearizable && report.is_fully_linearizable;
    step.report = std::move(report);
    step.new_family = std::move(fam);
    summary.steps.push_back(std::move(step));
  }
  return summary;
}

std::string render(const ReductionReport& report) {
  std::ostringstream out;
  out << "order " << report.order << ": basis " << report.span.basis.size() << " ("
      << report.span.basis.quadratic_size() << " quadratic), generators "
      << report.span.generators.size() << ", span dimension " << report.span_dimension
      << ", order-" << report.order << " linear rank " << report.linear_dimension << '\n';
  out << "  fully linearizable: " << (report.is_fully_linearizable ? "yes" : "no") << '\n';
  for (const auto& c : report.certificates) {
    out << "  [" << (c.linearizable ? (c.is_new ? "NEW " : "ok  ") : "QUAD") << "] "
        << c.relation.to_string() << '\n';
    out << "         residue: " << c.residue.to_string() << "  (" << c.combination.size()
        << " generators)\n";
  }
  out << "  new linear relations: " << report.reduced_relations.size() << '\n';
  for (const auto& r : report.reduced_relations) out << "    0 = " << r.to_string() << '\n';
  return out.str();
}

std::string render(const ProbeSummary& summary) {
  std::ostringstream out;
  out << "order | linearizable | new | rank(B,C) | +residues | +NEW | +both | residues in NEW | NEW in residues\n";
  for (const auto& s : summary.steps) {
    out << s.order << " | " << (s.report.is_fully_linearizable ? "yes" : "no") << " | "
        << s.report.reduced_relations.size() << " | " << s.linear_rank << " | "
        << s.rank_with_residues << " | " << s.rank_with_new_family << " | " << s.rank_with_both
        << " | " << (s.residues_explained_by_new_family ? "yes" : "no") << " | "
        << (s.new_family_explained_by_residues ? "yes" : "no") << '\n';
  }
  out << "all linearizable through order " << summary.n_max << ": "
      << (summary.all_linearizable ? "yes" : "no") << '\n';
  return out.str();
}

}  // namespace kmm
