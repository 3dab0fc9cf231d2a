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

#include "kmm/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "kmm/json_io.hpp"

namespace kmm::cli {

namespace {

const std::set<std::string> kCommands = {"gen", "verify", "reduce", "z-eval", "moments", "residue-check"};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct RunConfig {
  std::string family = "all";
  int order = 0;
  int N = 0;
  std::string lambdas;
  int g_order = 0;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  double g = 0;
  int k = 2;
  std::string partition;
  std::string input;
  std::string out;
  std::string format = "json";
  int degree_cap = 12;
  std::string pivot = "smallest-denominator";
  std::string lower = "residues";
  bool probe = false;
  bool serial = false;
  std::size_t basis_cap = 20000;
};

void add_common(CLI::App* app, RunConfig& cfg) {
  app->add_option("--out", cfg.out, "write the document to this file");
  app->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app->add_option("--config", "key=value configuration file");
}

void add_field(CLI::App* app, RunConfig& cfg) {
  app->add_option("--N", cfg.N, "matrix size for a seeded random external field");
  app->add_option("--lambdas,--lambda", cfg.lambdas, "comma separated eigenvalues, p/q or decimals");
  app->add_option("--seed", cfg.seed, "seed for the random external field");
  app->add_option("--g-order", cfg.g_order, "order of the expansion in the quartic coupling")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--degree-cap", cfg.degree_cap, "largest Gaussian moment degree computed")
      ->check(CLI::PositiveNumber);
}

ExternalField make_field(const RunConfig& cfg) {
  if (!cfg.lambdas.empty()) {
    ExternalField field(parse_rational_list(cfg.lambdas));
    if (cfg.N != 0 && cfg.N != field.size()) {
      throw DomainError("--N " + std::to_string(cfg.N) + " disagrees with " +
                        std::to_string(field.size()) + " lambdas");
    }
    return field;
  }
  if (cfg.N <= 0) throw DomainError("give --lambdas or a positive --N");
  return ExternalField::random(cfg.N, cfg.seed);
}

Json field_json(const ExternalField& f) {
  Json out = Json::array();
  for (const auto& l : f.lambdas()) out.push_back(to_json(l));
  return out;
}

std::vector<Family> families(const std::string& name) {
  if (name == "all") return {Family::C, Family::B, Family::BKP, Family::NEW};
  return {parse_family(name)};
}

void emit(const RunConfig& cfg, const std::string& json_text, const std::string& text,
          std::ostream& out) {
  const std::string& doc = cfg.format == "json" ? json_text : text;
  if (cfg.out.empty()) {
    out << doc;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw DomainError("cannot open " + cfg.out + " for writing");
  file << doc;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  Json docs = Json::array();
  std::string text;
  for (Family f : families(cfg.family)) {
    RelationSet set = generate(f, cfg.order);
    docs.push_back(to_json(set));
    text += render(set);
  }
  emit(cfg, dump(docs.size() == 1 ? docs[0] : docs), text, out);
  return kOk;
}

/// A RelationSet document, a list of them, a list of expressions or one expression.
std::vector<MomentExpr> read_expressions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError(path + ": " + e.what());
  }
  std::vector<MomentExpr> out;
  auto take = [&](const Json& j) {
    if (j.contains("relations")) {
      for (const auto& r : j.at("relations")) out.push_back(moment_expr_from_json(r));
    } else {
      out.push_back(moment_expr_from_json(j));
    }
  };
  try {
    if (doc.is_array()) {
      for (const auto& j : doc) take(j);
    } else {
      take(doc);
    }
  } catch (const Json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
  return out;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  WickEngine engine(make_field(cfg), WickOptions{cfg.degree_cap, true});
  Json results = Json::array();
  std::ostringstream text;
  bool all = true;
  std::vector<std::pair<std::string, MomentExpr>> targets;
  if (!cfg.input.empty()) {
    for (auto& e : read_expressions(cfg.input)) targets.emplace_back("input", std::move(e));
  } else {
    if (cfg.order <= 0) throw DomainError("verify needs --order or --input");
    for (Family f : families(cfg.family)) {
      for (const auto& r : generate(f, cfg.order).relations) targets.emplace_back(family_name(f), r.expr);
    }
  }
  for (const auto& [source, expr] : targets) {
    const VerifyReport rep = verify(expr, engine, cfg.g_order);
    all = all && rep.holds;
    results.push_back({{"family", source},
                       {"relation", expr.to_string()},
                       {"residual", to_json(rep.residual)},
                       {"holds", rep.holds}});
    text << (rep.holds ? "ok   " : "FAIL ") << source << "  0 = " << expr.to_string();
    if (!rep.holds) text << "  residual " << rep.residual.to_string();
    text << '\n';
  }
  text << (all ? "all relations hold" : "some relations FAIL") << " (N=" << engine.field().size()
       << ", g-order " << cfg.g_order << ")\n";
  Json doc = with_schema("verify_report", {{"family", cfg.family},
                                           {"order", cfg.order},
                                           {"N", engine.field().size()},
                                           {"lambdas", field_json(engine.field())},
                                           {"g_order", cfg.g_order},
                                           {"all_hold", all},
                                           {"results", std::move(results)}});
  emit(cfg, dump(doc), text.str(), out);
  return all ? kOk : kVerificationFailed;
}

int cmd_reduce(const RunConfig& cfg, std::ostream& out) {
  ReduceOptions options;
  options.basis_cap = cfg.basis_cap;
  options.pivot = cfg.pivot == "first-row" ? PivotStrategy::FirstRow : PivotStrategy::SmallestDenominator;
  options.lower = cfg.lower == "residues+new" ? LowerInputs::ResiduesAndNewFamily : LowerInputs::Residues;
  if (cfg.probe) {
    ProbeSummary summary = probe_open_question(cfg.order, options);
    emit(cfg, dump(to_json(summary)), render(summary), out);
    return kOk;
  }
  ReductionReport report = reduce_quadratic(cfg.order, options);
  for (const auto& c : report.certificates) {
    if (!certificate_sound(report, c)) throw Error("unsound certificate for " + c.source);
  }
  emit(cfg, dump(to_json(report)), render(report), out);
  return kOk;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  for (const auto& q : parse_rational_list(csv)) out.push_back(q.get_d());
  return out;
}

int cmd_z_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.lambdas.empty()) throw DomainError("z-eval needs --lambda");
  QuadOptions options;
  options.parallel = !cfg.serial;
  ZReport report = z_eval(parse_doubles(cfg.lambdas), cfg.g, cfg.tol, options);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  std::ostringstream text;
  text.precision(15);
  text << "Z = " << report.value << " +- " << report.error_estimate << " (N=" << report.N
       << ", g=" << report.g << ")\n";
  emit(cfg, dump(to_json(report)), text.str(), out);
  return kOk;
}

int cmd_moments(const RunConfig& cfg, std::ostream& out) {
  if (cfg.partition.empty()) throw DomainError("moments needs --partition");
  std::vector<int> parts;
  for (const auto& q : parse_rational_list(cfg.partition)) {
    if (q.get_den() != 1) throw DomainError("partition parts must be integers");
    parts.push_back(static_cast<int>(q.get_num().get_si()));
  }
  const OddPartition key(parts);
  WickEngine engine(make_field(cfg), WickOptions{cfg.degree_cap, true});
  const GSeries m = engine.moment(key, cfg.g_order);
  Json doc = with_schema("moments", {{"partition", to_json(key)},
                                     {"N", engine.field().size()},
                                     {"lambdas", field_json(engine.field())},
                                     {"g_order", cfg.g_order},
                                     {"coefficients", to_json(m)}});
  emit(cfg, dump(doc), key.symbol() + " = " + m.to_string() + "\n", out);
  return kOk;
}

int cmd_residue(const RunConfig& cfg, std::ostream& out) {
  if (cfg.lambdas.empty()) throw DomainError("residue-check needs --lambdas");
  ResidueReport r = residue_side_check(cfg.k, parse_rational_list(cfg.lambdas), cfg.tol);
  std::ostringstream text;
  text.precision(15);
  text << "k=" << r.k << "  lhs=" << to_string(r.lhs_exact) << " (" << r.lhs << ")  rhs=" << r.rhs
       << " +- " << r.rhs_error << "  ratio=" << r.ratio << '\n';
  emit(cfg, dump(to_json(r)), text.str(), out);
  return kOk;
}

}  // namespace

std::vector<std::string> apply_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw CLI::FileError("cannot read config file " + *path);

  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  std::optional<std::string> command;
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ConversionError(*path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "command") {
      command = value;
      continue;
    }
    if (given.count(key)) continue;
    if (value == "true" && (key == "probe" || key == "serial")) {
      extra.push_back("--" + key);
    } else {
      extra.push_back("--" + key + "=" + value);
    }
  }
  std::vector<std::string> out;
  auto cmd = std::find_if(args.begin(), args.end(), [](const std::string& a) { return kCommands.count(a) > 0; });
  if (cmd != args.end()) {
    out.assign(args.begin(), cmd + 1);
    out.insert(out.end(), extra.begin(), extra.end());
    out.insert(out.end(), cmd + 1, args.end());
  } else {
    if (command) out.push_back(*command);
    out.insert(out.end(), extra.begin(), extra.end());
    out.insert(out.end(), args.begin(), args.end());
  }
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Moment relations of the Kontsevich matrix model with even potential", "kmm"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate a relation family at one order");
  gen->add_option("--family", cfg.family, "C, B, BKP, NEW or all");
  gen->add_option("--order", cfg.order, "total weight")->required();
  add_common(gen, cfg);

  auto* ver = app.add_subcommand("verify", "check relations against exact Gaussian moments");
  ver->add_option("--family", cfg.family, "C, B, BKP, NEW or all");
  ver->add_option("--order", cfg.order, "total weight");
  ver->add_option("--input", cfg.input, "JSON file with expressions or relation sets to check");
  add_field(ver, cfg);
  add_common(ver, cfg);

  auto* red = app.add_subcommand("reduce", "reduce quadratic relations modulo linear ones");
  red->add_option("--order", cfg.order, "total weight")->required();
  red->add_option("--pivot", cfg.pivot, "smallest-denominator or first-row")
      ->check(CLI::IsMember({"smallest-denominator", "first-row"}));
  red->add_option("--lower", cfg.lower, "lower-order inputs: residues or residues+new")
      ->check(CLI::IsMember({"residues", "residues+new"}));
  red->add_option("--basis-cap", cfg.basis_cap, "largest basis accepted");
  red->add_flag("--probe", cfg.probe, "iterate orders 8..order with the NEW family added");
  add_common(red, cfg);

  auto* z = app.add_subcommand("z-eval", "evaluate Z at t = 0 by principal-value quadrature");
  z->add_option("--lambda,--lambdas", cfg.lambdas, "comma separated eigenvalues")->required();
  z->add_option("--g", cfg.g, "quartic coupling, g <= 0");
  z->add_option("--tol", cfg.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  z->add_flag("--serial", cfg.serial, "evaluate matrix entries on one thread");
  add_common(z, cfg);

  auto* mom = app.add_subcommand("moments", "normalized moment as a series in g");
  mom->add_option("--partition", cfg.partition, "odd parts, e.g. 3,1")->required();
  add_field(mom, cfg);
  add_common(mom, cfg);

  auto* res = app.add_subcommand("residue-check", "both sides of the residue identity at N = 2");
  res->add_option("--k", cfg.k, "index of q_k")->check(CLI::PositiveNumber);
  res->add_option("--lambdas,--lambda", cfg.lambdas, "two eigenvalues")->required();
  res->add_option("--tol", cfg.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  add_common(res, cfg);

  try {
    std::vector<std::string> args = apply_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(cfg, out);
    if (ver->parsed()) return cmd_verify(cfg, out);
    if (red->parsed()) return cmd_reduce(cfg, out);
    if (z->parsed()) return cmd_z_eval(cfg, out, err);
    if (mom->parsed()) return cmd_moments(cfg, out);
    if (res->parsed()) return cmd_residue(cfg, out);
  } catch (const CapExceeded& e) {
    err << "refused: " << e.what() << '\n';
    return kRefused;
  } catch (const ConvergenceError& e) {
    err << "refused: " << e.what() << '\n';
    return kRefused;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace kmm::cli
