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

#include "kmm/json_io.hpp"

#include <cmath>

namespace kmm {

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw DomainError("expected a rational as a \"p/q\" string");
}

Json to_json(const Multidegree& m) {
  Json out = Json::array();
  for (const auto& e : m.entries()) {
    out.push_back(Json::array({std::string(1, alphabet_letter(e.alphabet)), e.index, e.exponent}));
  }
  return out;
}

Multidegree multidegree_from_json(const Json& j) {
  std::vector<Multidegree::Entry> entries;
  for (const auto& e : j) {
    entries.push_back({parse_alphabet(e.at(0).get<std::string>()), e.at(1).get<int>(), e.at(2).get<int>()});
  }
  return Multidegree(std::move(entries));
}

Json to_json(const Series& s) {
  Json out = Json::array();
  for (auto it = s.terms().rbegin(); it != s.terms().rend(); ++it) {
    out.push_back({{"monomial", to_json(it->first)}, {"coeff", to_json(it->second)}});
  }
  return out;
}

Series series_from_json(const Json& j, int truncation) {
  std::vector<std::pair<Multidegree, Rational>> terms;
  for (const auto& t : j) {
    terms.emplace_back(multidegree_from_json(t.at("monomial")), rational_from_json(t.at("coeff")));
  }
  return make_series(terms, truncation);
}

Json to_json(const OddPartition& p) { return Json(p.parts()); }

Json to_json(const TracePoly& p) {
  Json out = Json::array();
  for (const auto& [key, c] : p.terms()) {
    out.push_back({{"partition", to_json(key.first)},
                   {"extra", to_json(key.second)},
                   {"coeff", to_json(c)}});
  }
  return out;
}

Json to_json(const GSeries& s) {
  Json out = Json::array();
  for (const auto& c : s.coeffs()) out.push_back(to_json(c));
  return out;
}

Json to_json(const MomentExpr& e) {
  Json linear = Json::array();
  for (const auto& [p, c] : e.linear()) {
    linear.push_back({{"partition", to_json(p)}, {"coeff", to_json(c)}});
  }
  Json quadratic = Json::array();
  for (const auto& [p, c] : e.quadratic()) {
    quadratic.push_back({{"partitions", Json::array({to_json(p.first), to_json(p.second)})},
                         {"coeff", to_json(c)}});
  }
  return {{"order", e.order()},
          {"text", e.to_string()},
          {"linear", std::move(linear)},
          {"quadratic", std::move(quadratic)}};
}

MomentExpr moment_expr_from_json(const Json& j) {
  MomentExpr e(j.at("order").get<int>());
  for (const auto& t : j.at("linear")) {
    e.add_linear(OddPartition(t.at("partition").get<std::vector<int>>()), rational_from_json(t.at("coeff")));
  }
  for (const auto& t : j.at("quadratic")) {
    const auto& ps = t.at("partitions");
    e.add_product(OddPartition(ps.at(0).get<std::vector<int>>()),
                  OddPartition(ps.at(1).get<std::vector<int>>()), rational_from_json(t.at("coeff")));
  }
  return e;
}

Json with_schema(const std::string& kind, Json body) {
  Json out = {{"schema_version", kSchemaVersion}, {"kind", kind}};
  for (auto& [k, v] : body.items()) out[k] = std::move(v);
  return out;
}

Json to_json(const RelationSet& set) {
  Json relations = Json::array();
  Json provenance = Json::array();
  for (const auto& r : set.relations) {
    Json rel = to_json(r.expr);
    rel["scale_note"] = "block = " + to_string(r.block_scale) + " * (" +
                        r.block_polynomial.to_string() + ")";
    rel["block_scale"] = to_json(r.block_scale);
    rel["block_polynomial"] = to_json(r.block_polynomial);
    relations.push_back(std::move(rel));
    Json sources = Json::array();
    for (const auto& p : r.provenance) {
      sources.push_back({{"monomial", to_json(p.monomial)},
                         {"label", p.label},
                         {"scale", to_json(p.scale)}});
    }
    provenance.push_back(std::move(sources));
  }
  Json body = {{"family", family_name(set.family)}, {"order", set.order}};
  if (!set.chain.empty()) {
    Json chain = Json::array();
    for (const auto& c : set.chain) chain.push_back(to_json(c));
    body["chain_scale"] = to_json(set.chain_scale);
    body["chain"] = std::move(chain);
  }
  body["relations"] = std::move(relations);
  body["provenance"] = std::move(provenance);
  return with_schema("relation_set", std::move(body));
}

Json to_json(const ReductionReport& report) {
  const auto& basis = report.span.basis;
  Json certificates = Json::array();
  for (const auto& c : report.certificates) {
    Json combination = Json::array();
    for (const auto& [g, coeff] : c.combination) {
      combination.push_back({{"generator", report.span.generators.at(static_cast<std::size_t>(g)).label},
                             {"coeff", to_json(coeff)}});
    }
    certificates.push_back({{"source", c.source},
                            {"relation", to_json(c.relation)},
                            {"linearizable", c.linearizable},
                            {"is_new", c.is_new},
                            {"residue", to_json(c.residue)},
                            {"combination", std::move(combination)}});
  }
  Json reduced = Json::array();
  for (const auto& r : report.reduced_relations) reduced.push_back(to_json(r));
  return with_schema("reduction_report",
                     {{"order", report.order},
                      {"basis_size", basis.size()},
                      {"quadratic_columns", basis.quadratic_size()},
                      {"generators", report.span.generators.size()},
                      {"span_dimension", report.span_dimension},
                      {"linear_dimension", report.linear_dimension},
                      {"fully_linearizable", report.is_fully_linearizable},
                      {"reduced_relations", std::move(reduced)},
                      {"certificates", std::move(certificates)}});
}

Json to_json(const ProbeSummary& summary) {
  Json steps = Json::array();
  for (const auto& s : summary.steps) {
    Json residues = Json::array();
    for (const auto& r : s.report.reduced_relations) residues.push_back(to_json(r));
    Json fam = Json::array();
    for (const auto& r : s.new_family.relations) fam.push_back(to_json(r.expr));
    steps.push_back({{"order", s.order},
                     {"fully_linearizable", s.report.is_fully_linearizable},
                     {"residues", std::move(residues)},
                     {"new_family", std::move(fam)},
                     {"linear_rank", s.linear_rank},
                     {"rank_with_residues", s.rank_with_residues},
                     {"rank_with_new_family", s.rank_with_new_family},
                     {"rank_with_both", s.rank_with_both},
                     {"residues_explained_by_new_family", s.residues_explained_by_new_family},
                     {"new_family_explained_by_residues", s.new_family_explained_by_residues}});
  }
  return with_schema("open_question_probe", {{"n_max", summary.n_max},
                                              {"all_linearizable", summary.all_linearizable},
                                              {"steps", std::move(steps)}});
}

Json to_json(const ZReport& report) {
  return with_schema("z_report", {{"N", report.N},
                                  {"lambdas", report.lambdas},
                                  {"g", report.g},
                                  {"tol", report.tol},
                                  {"value", report.value},
                                  {"error_estimate", report.error_estimate},
                                  {"warnings", report.warnings}});
}

Json to_json(const ResidueReport& report) {
  Json lambdas = Json::array();
  for (const auto& l : report.lambdas) lambdas.push_back(to_json(l));
  Json ratio = std::isnan(report.ratio) ? Json(nullptr) : Json(report.ratio);
  return with_schema("residue_check", {{"k", report.k},
                                       {"lambdas", std::move(lambdas)},
                                       {"lhs_exact", to_json(report.lhs_exact)},
                                       {"lhs", report.lhs},
                                       {"rhs", report.rhs},
                                       {"rhs_error", report.rhs_error},
                                       {"ratio", std::move(ratio)}});
}

}  // namespace kmm
