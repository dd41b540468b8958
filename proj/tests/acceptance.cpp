// ============================================================================
// acceptance — end-to-end release gate
// ============================================================================
//
// Runs the nine release checks and prints one PASS/FAIL line per check:
//
//   1. differential agreement between the engine and the reference fixpoint
//      over a 1000-theory random corpus, all configurations
//   2. no literal is both proved and refuted for the same modality
//   3. no literal and its complement are both obligatory
//   4. settled conclusions refute their complements (obligation refutes the
//      opposite obligation and permission; permission refutes the opposite
//      obligation)
//   5. every obligatory literal is weakly permitted
//   6. metamorphic equivalence under the five theory-simplification
//      transformations
//   7. bundled fixture theories reproduce their reviewed snapshots
//   8. work counter grows linearly in theory size
//   9. parser robustness: random-byte fuzzing and round-trip identity
//
// Exit status is the number of failed checks.
//
// ============================================================================

#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ddl/bench.hpp"
#include "ddl/diff.hpp"
#include "ddl/engine.hpp"
#include "ddl/generator.hpp"
#include "ddl/oracle.hpp"
#include "ddl/parser.hpp"
#include "ddl/queries.hpp"

using namespace ddl;

namespace {

int failures = 0;

void report(int criterion, const char* what, bool ok, const std::string& detail = "") {
  std::printf("%s  %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, what,
              detail.empty() ? "" : " — ", detail.c_str());
  if (!ok) ++failures;
}

Theory corpus_theory(std::uint64_t seed) {
  GenParams p;  // defaults: 8 atoms, 12 rules, chains <= 4, antecedents <= 3
  p.seed = seed;
  return generate_theory(p);
}

// ---------------------------------------------------------------------------
// 1: differential agreement
// ---------------------------------------------------------------------------

void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  const auto configs = all_engine_configs();
  int mismatches = 0;
  std::string first;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Theory t = corpus_theory(seed);
    for (const EngineConfig& cfg : configs) {
      if (compute_extension(t, cfg).extension == oracle_extension(t, cfg)) continue;
      ++mismatches;
      if (first.empty())
        first = "first at seed " + std::to_string(seed) + ", mode " +
                defeater_mode_name(cfg.defeater_mode) +
                (cfg.weak_perm_antecedent ? ", weak-perm antecedents" : "");
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < 60.0;
  report(1, "engine matches reference fixpoint on 1000 random theories x 6 configs",
         mismatches == 0 && in_time,
         mismatches ? std::to_string(mismatches) + " mismatches (" + first + ")"
                    : (in_time ? "" : "took " + std::to_string(secs) + "s (limit 60s)"));
}

// ---------------------------------------------------------------------------
// 2-5: extension sanity properties over the consistent corpus
// ---------------------------------------------------------------------------

void criteria_2_to_5() {
  int bad_disjoint = 0, bad_clash = 0, bad_refute = 0, bad_weak = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Theory t = corpus_theory(seed);
    ConsistencyReport rep = check_consistency(t);
    if (!rep.consistent) continue;
    Extension e = compute_extension(t).extension;
    for (const Lit& l : e.plus_dO)
      if (e.minus_dO.count(l)) ++bad_disjoint;
    for (const Lit& l : e.plus_dP)
      if (e.minus_dP.count(l)) ++bad_disjoint;
    if (rep.o_consistent) {
      for (const Lit& l : e.plus_dO) {
        const Lit nl = complement_literal(l);
        if (e.plus_dO.count(nl)) ++bad_clash;
        if (!e.minus_dO.count(nl) || !e.minus_dP.count(nl)) ++bad_refute;
        if (!is_weakly_permitted(e, l)) ++bad_weak;
      }
      for (const Lit& l : e.plus_dP)
        if (!e.minus_dO.count(complement_literal(l))) ++bad_refute;
    }
  }
  report(2, "proved and refuted sets are disjoint per modality", bad_disjoint == 0,
         bad_disjoint ? std::to_string(bad_disjoint) + " overlaps" : "");
  report(3, "never both a literal and its complement obligatory", bad_clash == 0,
         bad_clash ? std::to_string(bad_clash) + " clashes" : "");
  report(4, "settled conclusions refute their complements", bad_refute == 0,
         bad_refute ? std::to_string(bad_refute) + " gaps" : "");
  report(5, "every obligatory literal is weakly permitted", bad_weak == 0,
         bad_weak ? std::to_string(bad_weak) + " gaps" : "");
}

// ---------------------------------------------------------------------------
// 6: metamorphic equivalence under theory simplification
// ---------------------------------------------------------------------------

SegTag tag_of(const Rule& r, int idx1) {
  return head_tag(r.kind, idx1, r.head.otimes_len, DefeaterMode::RulesOnly);
}

int find_tagged(const Rule& r, Lit l, SegTag want) {
  for (int j = 1; j <= r.head.length(); ++j)
    if (r.head.elements[static_cast<std::size_t>(j - 1)] == l && tag_of(r, j) == want) return j;
  return 0;
}

/// Truncate the head at l if l sits at a position with the given tag.
Rule trunc_tagged(Rule r, Lit l, SegTag want) {
  if (find_tagged(r, l, want)) return chain_truncate(r, l);
  return r;
}

/// Remove l from the head if it sits at a position with the given tag.
std::optional<Rule> remove_tagged(Rule r, Lit l, SegTag want) {
  if (find_tagged(r, l, want)) return rule_remove(r, l);
  return r;
}

bool ant_meets(const Rule& r, const std::vector<Item>& set) {
  for (const Item& a : r.antecedent)
    for (const Item& x : set)
      if (a == x) return true;
  return false;
}

void ant_erase(Rule& r, const Item& it) {
  std::erase(r.antecedent, it);
}

/// Rebuilds a theory from transformed rules, pruning superiority pairs whose
/// endpoints were deleted.
Theory rebuild(const Theory& t, std::vector<Item> facts, std::vector<Rule> rules) {
  Theory out;
  out.symbols = t.symbols;
  std::sort(facts.begin(), facts.end());
  facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
  out.facts = std::move(facts);
  out.rules = std::move(rules);
  for (const auto& pr : t.sup.pairs)
    if (out.find_rule(pr.first) && out.find_rule(pr.second)) out.sup.pairs.insert(pr);
  return out;
}

enum class Simplify { PlainFact, SettledObl, RefutedObl, SettledPerm, RefutedPerm };

/// Applies one of the five simplification transformations for literal p.
/// Returns nullopt when a precondition fails.
std::optional<Theory> simplify(const Theory& t, Simplify kind, Lit p) {
  const Lit np = complement_literal(p);
  std::vector<Item> kill_set, erase_item;
  switch (kind) {
    case Simplify::PlainFact:
      kill_set = {Item::plain(np)};
      erase_item = {Item::plain(p)};
      break;
    case Simplify::SettledObl:
      kill_set = complement_set(Item::obl(p));  // {¬O p, O ∼p, P ∼p}
      erase_item = {Item::obl(p)};
      break;
    case Simplify::RefutedObl:
      kill_set = {Item::obl(p)};
      erase_item = {Item::not_obl(p)};
      break;
    case Simplify::SettledPerm:
      kill_set = complement_set(Item::perm(p));  // {¬P p, O ∼p}
      erase_item = {Item::perm(p)};
      break;
    case Simplify::RefutedPerm:
      kill_set = {Item::perm(p)};
      erase_item = {Item::not_perm(p)};
      break;
  }

  std::vector<Item> facts = t.facts;
  if (kind == Simplify::PlainFact) std::erase(facts, Item::plain(p));

  std::vector<Rule> rules;
  for (const Rule& r0 : t.rules) {
    if (ant_meets(r0, kill_set)) continue;
    Rule r = r0;
    for (const Item& it : erase_item) ant_erase(r, it);
    std::optional<Rule> cur = r;
    switch (kind) {
      case Simplify::PlainFact:
        cur = trunc_tagged(*cur, p, SegTag::O);
        break;
      case Simplify::SettledObl:
        cur = trunc_tagged(*cur, np, SegTag::O);
        if (cur) cur = remove_tagged(*cur, np, SegTag::O);
        if (cur) cur = remove_tagged(*cur, p, SegTag::O);
        if (cur) cur = remove_tagged(*cur, np, SegTag::P);
        break;
      case Simplify::RefutedObl:
        // Truncate after p but keep the occurrence itself: even with -dO p,
        // the occurrence still blocks derivations of ~p whenever its rule's
        // antecedent stays undetermined, so removing it can enlarge the
        // extension (plus_dO side) on literals other than p.
        cur = trunc_tagged(*cur, p, SegTag::O);
        break;
      case Simplify::SettledPerm:
        cur = trunc_tagged(*cur, np, SegTag::O);
        if (cur) cur = remove_tagged(*cur, np, SegTag::O);
        if (cur) cur = trunc_tagged(*cur, p, SegTag::P);
        break;
      case Simplify::RefutedPerm:
        cur = remove_tagged(*cur, p, SegTag::P);
        break;
    }
    if (cur) rules.push_back(std::move(*cur));
  }
  return rebuild(t, std::move(facts), std::move(rules));
}

/// The settled modal entries leave the comparison frame along with the
/// simplification, mirroring what each transformation consumes.
struct Excluded {
  std::set<Lit> obl, perm;
};

Excluded exclusions(Simplify kind, Lit p) {
  const Lit np = complement_literal(p);
  Excluded ex;
  switch (kind) {
    case Simplify::PlainFact:
      break;
    case Simplify::SettledObl:
      ex.obl = {p, np};
      ex.perm = {np};
      break;
    case Simplify::RefutedObl:
      ex.obl = {p};
      break;
    case Simplify::SettledPerm:
      ex.perm = {p};
      ex.obl = {np};
      break;
    case Simplify::RefutedPerm:
      ex.perm = {p};
      break;
  }
  return ex;
}

bool agree_on_shared(const Theory& a, const Theory& b, const Extension& ea, const Extension& eb,
                     const Excluded& ex) {
  std::set<AtomId> shared;
  for (AtomId x : used_atoms(a))
    if (used_atoms(b).count(x)) shared.insert(x);
  auto same = [&](const std::set<Lit>& sa, const std::set<Lit>& sb, const std::set<Lit>& skip) {
    for (AtomId x : shared)
      for (bool pos : {true, false}) {
        Lit l{x, pos};
        if (skip.count(l)) continue;
        if ((sa.count(l) > 0) != (sb.count(l) > 0)) return false;
      }
    return true;
  };
  return same(ea.plus_dO, eb.plus_dO, ex.obl) && same(ea.minus_dO, eb.minus_dO, ex.obl) &&
         same(ea.plus_dP, eb.plus_dP, ex.perm) && same(ea.minus_dP, eb.minus_dP, ex.perm);
}

void criterion_6() {
  int pairs = 0, bad = 0;
  std::string first;
  for (std::uint64_t seed = 0; seed < 4000 && pairs < 400; ++seed) {
    Theory t = corpus_theory(seed);
    const bool plain_kind = seed % 5 == 0;
    if (!plain_kind) {
      // the modal simplifications require a theory without plain facts
      std::erase_if(t.facts, [](const Item& f) { return f.kind == Item::Kind::Plain; });
    }
    Extension e = compute_extension(t).extension;

    std::vector<std::pair<Simplify, Lit>> candidates;
    if (plain_kind) {
      for (const Item& f : t.facts)
        if (f.kind == Item::Kind::Plain) {
          candidates.push_back({Simplify::PlainFact, f.lit});
          break;
        }
    } else {
      switch (seed % 5) {
        case 1:
          if (!e.plus_dO.empty()) candidates.push_back({Simplify::SettledObl, *e.plus_dO.begin()});
          break;
        case 2:
          if (!e.minus_dO.empty()) candidates.push_back({Simplify::RefutedObl, *e.minus_dO.begin()});
          break;
        case 3:
          if (!e.plus_dP.empty()) candidates.push_back({Simplify::SettledPerm, *e.plus_dP.begin()});
          break;
        default:
          if (!e.minus_dP.empty()) candidates.push_back({Simplify::RefutedPerm, *e.minus_dP.begin()});
          break;
      }
    }
    for (const auto& [kind, p] : candidates) {
      auto t2 = simplify(t, kind, p);
      if (!t2) continue;
      ++pairs;
      Extension e2 = compute_extension(*t2).extension;
      if (!agree_on_shared(t, *t2, e, e2, exclusions(kind, p))) {
        ++bad;
        if (first.empty())
          first = "seed " + std::to_string(seed) + " kind " +
                  std::to_string(static_cast<int>(kind)) + " lit " + lit_string(t.symbols, p);
      }
    }
  }
  report(6, "metamorphic equivalence under simplification transformations",
         pairs >= 200 && bad == 0,
         bad ? std::to_string(bad) + "/" + std::to_string(pairs) + " disagree (" + first + ")"
             : (pairs >= 200 ? std::to_string(pairs) + " pairs"
                             : "only " + std::to_string(pairs) + " pairs"));
}

// ---------------------------------------------------------------------------
// 7: fixtures
// ---------------------------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SpotCheck {
  const char* set;  // "plus_dO", ...
  const char* literal;
  bool expected_in;
};

bool lit_in(const Extension& e, const Theory& t, const char* set, const char* name) {
  std::string s(name);
  bool pos = s[0] != '~';
  auto id = t.symbols.lookup(pos ? s : s.substr(1));
  if (!id) return false;
  Lit l{*id, pos};
  std::string key(set);
  if (key == "plus_dO") return e.plus_dO.count(l) > 0;
  if (key == "minus_dO") return e.minus_dO.count(l) > 0;
  if (key == "plus_dP") return e.plus_dP.count(l) > 0;
  if (key == "minus_dP") return e.minus_dP.count(l) > 0;
  return false;
}

void criterion_7() {
  struct Fixture {
    const char* name;
    std::vector<SpotCheck> checks;
  };
  const std::vector<Fixture> fixtures = {
      {"park",
       {{"minus_dO", "Enter", true}, {"minus_dO", "~Enter", true}, {"plus_dO", "Enter", false}}},
      {"credit-act-nolicence",
       {{"plus_dO", "~CreditActivity", true}, {"minus_dP", "CreditActivity", true}}},
      {"credit-act",
       {{"plus_dP", "CreditActivity", true},
        {"minus_dO", "~CreditActivity", true},
        {"minus_dO", "CivilPenalty", true}}},
      {"copyright",
       {{"plus_dP", "ActualDamages", true}, {"minus_dP", "StatutoryDamages", true}}},
      {"weekend",
       {{"minus_dO", "~UseCar", true}, {"plus_dO", "UseCar", false}}},
  };
  bool all_ok = true;
  std::string detail;
  for (const Fixture& fx : fixtures) {
    const std::string base = std::string(DDL_FIXTURE_DIR) + "/" + fx.name;
    const std::string text = slurp(base + ".dl");
    ParseResult pr = parse_theory(text);
    if (!pr.ok()) {
      all_ok = false;
      detail = std::string(fx.name) + ".dl failed to parse";
      break;
    }
    Extension e = compute_extension(*pr.theory).extension;
    for (const SpotCheck& c : fx.checks)
      if (lit_in(e, *pr.theory, c.set, c.literal) != c.expected_in) {
        all_ok = false;
        detail = std::string(fx.name) + ": " + c.set + " " + c.literal + " wrong";
      }
    const std::string expected = slurp(base + ".expected.json");
    if (expected.empty() || serialize_extension(e, pr.theory->symbols) != expected) {
      all_ok = false;
      if (detail.empty()) detail = std::string(fx.name) + ": snapshot differs";
    }
  }
  report(7, "fixture theories reproduce their reviewed snapshots", all_ok, detail);
}

// ---------------------------------------------------------------------------
// 8: linearity
// ---------------------------------------------------------------------------

void criterion_8() {
  BenchReport rep = run_bench({1000, 10000, 100000, 1000000}, 3, BenchFamily::Chain);
  bool ok = rep.slope_mutations <= 1.2;
  std::string detail;
  for (std::size_t i = 0; i + 1 < rep.mutation_counts.size(); ++i) {
    const double ratio = static_cast<double>(rep.mutation_counts[i + 1]) /
                         static_cast<double>(std::max<std::uint64_t>(1, rep.mutation_counts[i]));
    if (ratio > 12.0) {
      ok = false;
      detail = "decade ratio " + std::to_string(ratio);
    }
  }
  if (ok) detail = "slope " + std::to_string(rep.slope_mutations);
  if (rep.wall_times.back() >= 5.0)
    std::printf("WARN 8: largest run took %.2fs (soft bound 5s)\n", rep.wall_times.back());
  report(8, "mutation counter grows linearly in theory size", ok, detail);
}

// ---------------------------------------------------------------------------
// 9: parser robustness
// ---------------------------------------------------------------------------

void criterion_9() {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100000; ++i) {
    std::string s;
    const std::size_t len = rng() % 120;
    for (std::size_t k = 0; k < len; ++k) s.push_back(static_cast<char>(rng() & 0xFF));
    (void)parse_theory(s);  // must not crash
  }
  int bad_roundtrip = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Theory t = corpus_theory(seed);
    ParseResult back = parse_theory(serialize_theory(t));
    if (!back.ok() || !theories_equal(t, *back.theory)) ++bad_roundtrip;
  }
  report(9, "parser survives fuzzing and round-trips generated theories", bad_roundtrip == 0,
         bad_roundtrip ? std::to_string(bad_roundtrip) + " round-trip failures" : "");
}

}  // namespace

int main() {
  criterion_1();
  criteria_2_to_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  return failures;
}
