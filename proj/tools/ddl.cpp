// ============================================================================
// ddl — command-line front end
// ============================================================================
//
// Subcommands:
//   check <file>                        consistency report (exit 0 / 2 / 1)
//   extension <file> [--format ...]     compute and print the extension
//   query <file> --tag T --literal L    yes / no / undetermined (exit 0/3/4)
//   explain <file> --tag T --literal L  proof trace or NotDerivable
//   oracle-diff [--seed --cases ...]    engine-vs-oracle differential run
//   bench --sizes s1,s2,... [--reps R]  linearity benchmark, JSON report
//
// ============================================================================

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ddl/bench.hpp"
#include "ddl/diff.hpp"
#include "ddl/engine.hpp"
#include "ddl/oracle.hpp"
#include "ddl/parser.hpp"
#include "ddl/queries.hpp"

namespace {

int fail_usage(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 1;
}

std::optional<ddl::Theory> load_theory(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    return std::nullopt;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  ddl::ParseResult res = ddl::parse_theory(ss.str());
  if (!res.ok()) {
    for (const auto& e : res.errors)
      std::cerr << path << ":" << e.span.line << ":" << e.span.column << ": "
                << ddl::parse_error_kind_name(e.kind) << ": " << e.message << "\n";
    return std::nullopt;
  }
  return std::move(res.theory);
}

bool parse_defeater_mode(const std::string& s, ddl::DefeaterMode& out) {
  if (s == "rules-only") out = ddl::DefeaterMode::RulesOnly;
  else if (s == "defeaters-in-rp") out = ddl::DefeaterMode::DefeatersInRP;
  else if (s == "defeaters-only") out = ddl::DefeaterMode::DefeatersOnly;
  else return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"defeasible deontic reasoner"};
  app.require_subcommand(1);

  std::string file, format = "json", mode_str = "rules-only", tag, literal, sizes_str,
              family_str = "chain";
  bool weak = false;
  std::uint64_t seed = 1;
  int cases = 1000, max_atoms = 8, max_rules = 12, reps = 3;

  auto add_common = [&](CLI::App* sub, bool with_file) {
    if (with_file) sub->add_option("file", file, "theory file")->required();
    sub->add_option("--defeater-mode", mode_str, "rules-only | defeaters-in-rp | defeaters-only");
    sub->add_flag("--weak-perm-antecedent", weak, "P-items also satisfied by weak permission");
  };

  auto* c_check = app.add_subcommand("check", "consistency report");
  c_check->add_option("file", file)->required();

  auto* c_ext = app.add_subcommand("extension", "compute the defeasible extension");
  add_common(c_ext, true);
  c_ext->add_option("--format", format, "json | text");

  auto* c_query = app.add_subcommand("query", "query one tagged literal");
  add_common(c_query, true);
  c_query->add_option("--tag", tag, "+O | -O | +P | -P | weak")->required();
  c_query->add_option("--literal", literal, "literal, e.g. a or ~a")->required();

  auto* c_explain = app.add_subcommand("explain", "explain a tagged conclusion");
  add_common(c_explain, true);
  c_explain->add_option("--tag", tag, "+O | -O | +P | -P")->required();
  c_explain->add_option("--literal", literal)->required();
  c_explain->add_option("--format", format, "text | json");

  auto* c_diff = app.add_subcommand("oracle-diff", "engine vs oracle differential run");
  c_diff->add_option("--seed", seed);
  c_diff->add_option("--cases", cases);
  c_diff->add_option("--max-atoms", max_atoms);
  c_diff->add_option("--max-rules", max_rules);

  auto* c_bench = app.add_subcommand("bench", "linearity benchmark");
  c_bench->add_option("--sizes", sizes_str, "comma-separated size targets")->required();
  c_bench->add_option("--reps", reps);
  c_bench->add_option("--family", family_str, "chain | antecedent | supfan");

  CLI11_PARSE(app, argc, argv);

  ddl::EngineConfig cfg;
  if (!parse_defeater_mode(mode_str, cfg.defeater_mode))
    return fail_usage("unknown defeater mode '" + mode_str + "'");
  cfg.weak_perm_antecedent = weak;

  if (c_check->parsed()) {
    auto t = load_theory(file);
    if (!t) return 1;
    ddl::ConsistencyReport rep = ddl::check_consistency(*t);
    std::cout << "consistent: " << (rep.consistent ? "yes" : "no") << "\n"
              << "o-consistent: " << (rep.o_consistent ? "yes" : "no") << "\n";
    for (const auto& v : rep.violations) {
      const char* kind = v.kind == ddl::ConsistencyViolation::Kind::CyclicSuperiority
                             ? "cyclic-superiority"
                             : v.kind == ddl::ConsistencyViolation::Kind::ComplementaryFacts
                                   ? "complementary-facts"
                                   : "o-clash-facts";
      std::cout << "violation: " << kind << " " << v.detail << "\n";
    }
    return rep.consistent ? 0 : 2;
  }

  if (c_ext->parsed()) {
    auto t = load_theory(file);
    if (!t) return 1;
    ddl::EngineResult res = ddl::compute_extension(*t, cfg);
    if (!res.input_consistent) std::cerr << "warning: input-inconsistent theory\n";
    std::cout << ddl::serialize_extension(res.extension, t->symbols,
                                          format == "text" ? ddl::ExtensionFormat::Text
                                                           : ddl::ExtensionFormat::Json);
    return 0;
  }

  if (c_query->parsed() || c_explain->parsed()) {
    auto t = load_theory(file);
    if (!t) return 1;
    auto lit = ddl::parse_literal_string(literal, t->symbols);
    if (!lit) return fail_usage("cannot parse literal '" + literal + "'");

    if (c_query->parsed() && tag == "weak") {
      ddl::Extension e = ddl::compute_extension(*t, cfg).extension;
      if (ddl::is_weakly_permitted(e, *lit)) { std::cout << "yes\n"; return 0; }
      if (e.plus_dO.count(ddl::complement_literal(*lit))) { std::cout << "no\n"; return 3; }
      std::cout << "undetermined\n";
      return 4;
    }

    ddl::QueryTarget target;
    target.literal = *lit;
    if (tag == "+O") { target.plus = true; target.modality = ddl::Modality::Obligation; }
    else if (tag == "-O") { target.plus = false; target.modality = ddl::Modality::Obligation; }
    else if (tag == "+P") { target.plus = true; target.modality = ddl::Modality::Permission; }
    else if (tag == "-P") { target.plus = false; target.modality = ddl::Modality::Permission; }
    else return fail_usage("unknown tag '" + tag + "'");

    if (c_query->parsed()) {
      ddl::Extension e = ddl::compute_extension(*t, cfg).extension;
      const auto& pos = target.modality == ddl::Modality::Obligation ? e.plus_dO : e.plus_dP;
      const auto& neg = target.modality == ddl::Modality::Obligation ? e.minus_dO : e.minus_dP;
      const auto& same = target.plus ? pos : neg;
      const auto& opposite = target.plus ? neg : pos;
      if (same.count(*lit)) { std::cout << "yes\n"; return 0; }
      if (opposite.count(*lit)) { std::cout << "no\n"; return 3; }
      std::cout << "undetermined\n";
      return 4;
    }

    auto result = ddl::explain(*t, cfg, target);
    if (std::holds_alternative<ddl::NotDerivable>(result)) {
      std::cout << "NotDerivable: " << std::get<ddl::NotDerivable>(result).reason << "\n";
      return 3;
    }
    const auto& trace = std::get<ddl::ProofTrace>(result);
    if (format == "json") std::cout << ddl::trace_to_json(trace).dump(2) << "\n";
    else std::cout << ddl::trace_to_text(trace);
    return 0;
  }

  if (c_diff->parsed()) {
    ddl::DiffReport rep = ddl::run_oracle_diff(seed, cases, max_atoms, max_rules);
    if (rep.ok()) {
      std::cout << "ok: " << rep.cases_run << " cases, engine and oracle agree\n";
      return 0;
    }
    std::cout << "MISMATCH after " << rep.cases_run << " cases\n"
              << ddl::describe_mismatch(*rep.mismatch);
    return 1;
  }

  if (c_bench->parsed()) {
    std::vector<std::size_t> sizes;
    std::stringstream ss(sizes_str);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        sizes.push_back(static_cast<std::size_t>(std::stoull(part)));
      } catch (...) {
        return fail_usage("bad size '" + part + "'");
      }
    }
    if (sizes.size() < 2) return fail_usage("need at least two sizes");
    ddl::BenchFamily family = ddl::BenchFamily::Chain;
    if (family_str == "antecedent") family = ddl::BenchFamily::Antecedent;
    else if (family_str == "supfan") family = ddl::BenchFamily::SupFan;
    else if (family_str != "chain") return fail_usage("unknown family '" + family_str + "'");
    ddl::BenchReport rep = ddl::run_bench(sizes, reps, family);
    std::cout << ddl::bench_report_to_json(rep).dump(2) << "\n";
    return 0;
  }
  return 1;
}
