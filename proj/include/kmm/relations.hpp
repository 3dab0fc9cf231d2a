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

#include <string>
#include <vector>

#include "kmm/moment_expr.hpp"
#include "kmm/series.hpp"
#include "kmm/wick.hpp"

namespace kmm {

/// C: Tr(H^m) insertions against q_{k+m}; B: the t-linear identity;
/// BKP: the expanded bilinear Hirota relation; NEW: the conjectured linear
/// family carrying q_{2r}(tH/2) insertions.
enum class Family { C, B, BKP, NEW };

std::string family_name(Family f);
Family parse_family(std::string_view name);

/// Where one copy of a relation came from. For the s/t families the source is
/// the coefficient of `monomial`; for C it is the chain entry with trace power
/// `index` (for NEW, `index` is r). The source expression equals
/// scale * Relation::expr.
struct Provenance {
  Multidegree monomial;
  int index = 0;
  Rational scale;
  std::string label;
};

struct Relation {
  MomentExpr expr;  // coprime integers, positive leading coefficient
  std::vector<Provenance> provenance;
  /// sum over provenance of scale * monomial == block_scale * block_polynomial;
  /// the polynomial has coprime integer coefficients and a positive leading term.
  Series block_polynomial{0};
  Rational block_scale = 0;
};

struct RelationSet {
  Family family = Family::C;
  int order = 0;
  std::vector<Relation> relations;
  /// Family C only: the equal quantities <q_n(H~)> = <Tr(H^m) q_{n-m}(H~)> for
  /// m = 1, 3, ..., n-1, each multiplied by chain_scale (the smallest factor
  /// giving coprime integers across the whole chain).
  std::vector<MomentExpr> chain;
  Rational chain_scale = 1;
};

RelationSet gen_linear_C(int n);
RelationSet gen_linear_B(int n);
RelationSet gen_bkp(int n);
RelationSet gen_new(int n);
RelationSet generate(Family family, int n);

/// Linear relations of families B and C at order n (the inputs of the span).
std::vector<MomentExpr> linear_relations(int n);

struct VerifyReport {
  MomentExpr expr;
  GSeries residual;
  bool holds = false;
};

/// Substitutes the perturbative moments for every symbol; the relation holds
/// iff the residual vanishes through the requested g-order.
VerifyReport verify(const MomentExpr& expr, WickEngine& engine, int g_order);

/// Human readable listing used by the CLI text output.
std::string render(const RelationSet& set);

}  // namespace kmm
