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

#include <json.hpp>
#include <string>

#include "kmm/moment_expr.hpp"
#include "kmm/quadrature.hpp"
#include "kmm/reduce.hpp"
#include "kmm/relations.hpp"
#include "kmm/schurq.hpp"
#include "kmm/series.hpp"
#include "kmm/wick.hpp"

namespace kmm {

/// Insertion-ordered, so dumps are byte-stable.
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json to_json(const Multidegree& m);
Multidegree multidegree_from_json(const Json& j);

/// [{monomial: [[alphabet, index, exponent], ...], coeff: "p/q"}, ...] in
/// descending monomial order.
Json to_json(const Series& s);
Series series_from_json(const Json& j, int truncation = kDefaultTruncation);

Json to_json(const OddPartition& p);
Json to_json(const TracePoly& p);
Json to_json(const GSeries& s);

Json to_json(const MomentExpr& e);
MomentExpr moment_expr_from_json(const Json& j);

Json to_json(const RelationSet& set);
Json to_json(const ReductionReport& report);
Json to_json(const ProbeSummary& summary);
Json to_json(const ZReport& report);
Json to_json(const ResidueReport& report);

/// Adds schema_version in front of a document.
Json with_schema(const std::string& kind, Json body);

}  // namespace kmm
