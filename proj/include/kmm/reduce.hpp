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

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "kmm/moment_expr.hpp"
#include "kmm/relations.hpp"

namespace kmm {

using SparseVector = std::map<int, Rational>;

/// Coordinates for order-n moment expressions: products of two symbols first,
/// then single symbols. Only even-length partitions appear.
class Basis {
 public:
  explicit Basis(int order);

  int order() const { return order_; }
  std::size_t size() const { return quadratic_.size() + linear_.size(); }
  std::size_t quadratic_size() const { return quadratic_.size(); }
  const std::vector<SymbolPair>& quadratic() const { return quadratic_; }
  const std::vector<OddPartition>& linear() const { return linear_; }
  bool is_quadratic_column(int col) const { return col < static_cast<int>(quadratic_.size()); }

  /// Throws DomainError for symbols outside the basis (odd length, wrong weight).
  SparseVector embed(const MomentExpr& e) const;
  MomentExpr expr(const SparseVector& v) const;

 private:
  int order_;
  std::vector<SymbolPair> quadratic_;
  std::vector<OddPartition> linear_;
  std::map<SymbolPair, int> quadratic_index_;
  std::map<OddPartition, int> linear_index_;
};

struct Generator {
  MomentExpr expr;
  std::string label;
};

/// Linear relations of weight w < n times every symbol of weight n - w, plus
/// the order-n linear relations on their own.
struct Span {
  Basis basis;
  std::vector<Generator> generators;
};

enum class PivotStrategy { SmallestDenominator, FirstRow };

/// Which lower-order linear relations beyond B and C enter the span.
enum class LowerInputs {
  Residues,              // linear residues emitted by the reductions at lower orders
  ResiduesAndNewFamily,  // also the conjectured NEW family at lower orders
};

struct ReduceOptions {
  PivotStrategy pivot = PivotStrategy::SmallestDenominator;
  LowerInputs lower = LowerInputs::Residues;
  std::size_t basis_cap = 20000;
};

/// `extra` maps a weight w < n to additional linear relations of that weight.
Span build_span(int n, const std::map<int, std::vector<MomentExpr>>& extra = {},
                const ReduceOptions& options = {});

/// Row echelon form with the combination of input rows behind every row.
class Echelon {
 public:
  Echelon(std::size_t columns, const std::vector<SparseVector>& rows, PivotStrategy strategy);

  std::size_t rank() const { return rows_.size(); }

  struct Reduction {
    SparseVector remainder;
    SparseVector combination;  // input row index -> coefficient
  };
  /// target = sum combination[g] * input[g] + remainder. Only rows whose pivot
  /// column is below `column_limit` are used.
  Reduction reduce(SparseVector target, int column_limit = -1) const;

 private:
  struct Row {
    int pivot;
    SparseVector values;
    SparseVector combination;
  };
  std::vector<Row> rows_;  // sorted by pivot column
};

struct Certificate {
  MomentExpr relation;      // the quadratic relation being reduced
  std::string source;       // its provenance label
  SparseVector combination; // generator index -> coefficient
  MomentExpr residue;       // relation - sum combination * generators
  bool linearizable = false;
  bool is_new = false;
};

struct ReductionReport {
  int order = 0;
  Span span{Basis(0), {}};
  std::size_t span_dimension = 0;
  std::size_t linear_dimension = 0;  // rank of the order-n linear relations
  std::vector<MomentExpr> reduced_relations;
  bool is_fully_linearizable = true;
  std::vector<Certificate> certificates;
};

/// Reduces every BKP relation of order n modulo the span built with `extra`.
ReductionReport reduce_quadratic(int n, const std::map<int, std::vector<MomentExpr>>& extra,
                                 const ReduceOptions& options = {});

/// Runs the reduction at orders 6, 8, ..., n, feeding each order's new linear
/// residues into the span of the following ones; returns the order-n report.
ReductionReport reduce_quadratic(int n, const ReduceOptions& options = {});

/// True iff the certificate re-expands exactly to its relation.
bool certificate_sound(const ReductionReport& report, const Certificate& cert);

struct ProbeStep {
  int order = 0;
  ReductionReport report;
  RelationSet new_family;
  std::size_t linear_rank = 0;                 // B and C at this order
  std::size_t rank_with_residues = 0;          // plus emitted residues
  std::size_t rank_with_new_family = 0;        // plus NEW family
  std::size_t rank_with_both = 0;
  bool residues_explained_by_new_family = false;
  bool new_family_explained_by_residues = false;
};

struct ProbeSummary {
  int n_max = 0;
  std::vector<ProbeStep> steps;
  bool all_linearizable = true;
};

/// Iterates n = 8, 10, ..., n_max with the span augmented by every lower-order
/// residue and NEW-family relation.
ProbeSummary probe_open_question(int n_max, const ReduceOptions& options = {});

std::string render(const ReductionReport& report);
std::string render(const ProbeSummary& summary);

}  // namespace kmm
