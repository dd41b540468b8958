// ============================================================================
// ddl/diff.hpp — Differential testing of the engine against the oracle
// ============================================================================
//
// Runs seeded random theories through both the fast engine and the direct
// proof-condition oracle under every defeater mode and both weak-permission
// settings.  The first disagreement is greedily shrunk (rule, fact,
// superiority-pair, antecedent-item and chain-element deletion to a local
// minimum) before being reported.
//
// ============================================================================

#ifndef DDL_DIFF_HPP
#define DDL_DIFF_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddl/engine.hpp"
#include "ddl/generator.hpp"
#include "ddl/oracle.hpp"
#include "ddl/parser.hpp"

namespace ddl {

inline std::vector<EngineConfig> all_engine_configs() {
  std::vector<EngineConfig> out;
  for (DefeaterMode m :
       {DefeaterMode::RulesOnly, DefeaterMode::DefeatersInRP, DefeaterMode::DefeatersOnly})
    for (bool weak : {false, true}) out.push_back(EngineConfig{m, weak});
  return out;
}

inline const char* defeater_mode_name(DefeaterMode m) {
  switch (m) {
    case DefeaterMode::RulesOnly: return "rules-only";
    case DefeaterMode::DefeatersInRP: return "defeaters-in-rp";
    case DefeaterMode::DefeatersOnly: return "defeaters-only";
  }
  return "rules-only";
}

struct DiffMismatch {
  std::uint64_t seed = 0;
  EngineConfig config;
  Theory theory;  // shrunk
  Extension engine_ext, oracle_ext;
};

struct DiffReport {
  int cases_run = 0;
  std::optional<DiffMismatch> mismatch;
  bool ok() const { return !mismatch.has_value(); }
};

namespace detail {

inline bool engine_matches_oracle(const Theory& t, const EngineConfig& cfg) {
  return compute_extension(t, cfg).extension == oracle_extension(t, cfg);
}

/// One pass of candidate simplifications; returns the first smaller theory
/// still exhibiting the disagreement, if any.
inline std::optional<Theory> shrink_step(const Theory& t, const EngineConfig& cfg) {
  auto still_bad = [&](const Theory& cand) { return !engine_matches_oracle(cand, cfg); };

  for (std::size_t i = 0; i < t.rules.size(); ++i) {
    Theory cand = t;
    const std::string dropped = cand.rules[i].label;
    cand.rules.erase(cand.rules.begin() + static_cast<std::ptrdiff_t>(i));
    std::erase_if(cand.sup.pairs,
                  [&](const auto& p) { return p.first == dropped || p.second == dropped; });
    if (still_bad(cand)) return cand;
  }
  for (std::size_t i = 0; i < t.facts.size(); ++i) {
    Theory cand = t;
    cand.facts.erase(cand.facts.begin() + static_cast<std::ptrdiff_t>(i));
    if (still_bad(cand)) return cand;
  }
  for (const auto& pair : t.sup.pairs) {
    Theory cand = t;
    cand.sup.pairs.erase(pair);
    if (still_bad(cand)) return cand;
  }
  for (std::size_t i = 0; i < t.rules.size(); ++i) {
    for (std::size_t k = 0; k < t.rules[i].antecedent.size(); ++k) {
      Theory cand = t;
      auto& ant = cand.rules[i].antecedent;
      ant.erase(ant.begin() + static_cast<std::ptrdiff_t>(k));
      if (still_bad(cand)) return cand;
    }
    for (std::size_t k = 0; k < t.rules[i].head.elements.size(); ++k) {
      if (t.rules[i].head.elements.size() == 1) continue;
      Theory cand = t;
      Chain& h = cand.rules[i].head;
      h.elements.erase(h.elements.begin() + static_cast<std::ptrdiff_t>(k));
      if (static_cast<int>(k) < h.otimes_len) --h.otimes_len;
      if (cand.rules[i].kind == RuleKind::ObligationRule && h.otimes_len == 0)
        cand.rules[i].kind = RuleKind::PermissionRule;
      if (still_bad(cand)) return cand;
    }
  }
  return std::nullopt;
}

inline Theory shrink(Theory t, const EngineConfig& cfg) {
  while (auto smaller = shrink_step(t, cfg)) t = std::move(*smaller);
  return t;
}

}  // namespace detail

inline DiffReport run_oracle_diff(std::uint64_t seed, int cases, int max_atoms, int max_rules) {
  DiffReport report;
  const auto configs = all_engine_configs();
  for (int i = 0; i < cases; ++i) {
    GenParams p;
    p.seed = seed + static_cast<std::uint64_t>(i);
    std::mt19937_64 meta(p.seed ^ 0xA5A5A5A5A5A5A5A5ull);
    p.atoms = 1 + static_cast<int>(meta() % static_cast<unsigned>(max_atoms));
    p.rules = 1 + static_cast<int>(meta() % static_cast<unsigned>(max_rules));
    Theory t = generate_theory(p);
    ++report.cases_run;
    for (const EngineConfig& cfg : configs) {
      Extension eng = compute_extension(t, cfg).extension;
      Extension ora = oracle_extension(t, cfg);
      if (eng == ora) continue;
      DiffMismatch mm;
      mm.seed = p.seed;
      mm.config = cfg;
      mm.theory = detail::shrink(t, cfg);
      mm.engine_ext = compute_extension(mm.theory, cfg).extension;
      mm.oracle_ext = oracle_extension(mm.theory, cfg);
      report.mismatch = std::move(mm);
      return report;
    }
  }
  return report;
}

inline std::string describe_mismatch(const DiffMismatch& mm) {
  std::string out;
  out += "seed: " + std::to_string(mm.seed) + "\n";
  out += std::string("defeater mode: ") + defeater_mode_name(mm.config.defeater_mode) + "\n";
  out += std::string("weak-perm antecedent: ") + (mm.config.weak_perm_antecedent ? "on" : "off") + "\n";
  out += "minimized theory:\n" + serialize_theory(mm.theory);
  out += "engine extension:\n" + serialize_extension(mm.engine_ext, mm.theory.symbols);
  out += "oracle extension:\n" + serialize_extension(mm.oracle_ext, mm.theory.symbols);
  return out;
}

}  // namespace ddl

#endif  // DDL_DIFF_HPP
