// Proof-condition checker: applicability predicates and fixpoint extensions.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "ddl/generator.hpp"
#include "ddl/oracle.hpp"
#include "ddl/parser.hpp"
#include "ddl/queries.hpp"

using namespace ddl;

namespace {

Theory parse_ok(const std::string& text) {
  ParseResult res = parse_theory(text);
  REQUIRE(res.ok());
  return *res.theory;
}

Lit lit(const Theory& t, const std::string& name) {
  bool pos = name[0] != '~';
  auto id = t.symbols.lookup(pos ? name : name.substr(1));
  REQUIRE(id.has_value());
  return Lit{*id, pos};
}

bool in(const std::set<Lit>& s, const Theory& t, const std::string& name) {
  return s.count(lit(t, name)) > 0;
}

}  // namespace

TEST_CASE("applicability at a reparation index needs derived and violated prefix") {
  SECTION("prior obligation violated by the complementary fact") {
    Theory t = parse_ok("fact ~a.\nrule r: =>O a (x) b.\n");
    ProofState s;
    s.plus_dO.insert(lit(t, "a"));
    CHECK(applicable_O(t, t.rules[0], lit(t, "b"), 2, s));
  }
  SECTION("fulfilled obligation blocks the compensation") {
    Theory t = parse_ok("fact a.\nrule r: =>O a (x) b.\n");
    ProofState s;
    s.plus_dO.insert(lit(t, "a"));
    CHECK(!applicable_O(t, t.rules[0], lit(t, "b"), 2, s));
    CHECK(discarded(t, t.rules[0], lit(t, "b"), 2, s));
  }
  SECTION("unproved modal antecedent blocks applicability") {
    Theory t = parse_ok("rule r: O(x) =>O q.\n");
    ProofState s;
    CHECK(!applicable_O(t, t.rules[0], lit(t, "q"), 1, s));
  }
}

TEST_CASE("applicability at an ordered-permission index needs refuted prior permissions") {
  Theory t = parse_ok("rule r: =>P a (o) b.\n");
  ProofState refuted, proved;
  refuted.minus_dP.insert(lit(t, "a"));
  proved.plus_dP.insert(lit(t, "a"));
  CHECK(applicable_P(t, t.rules[0], lit(t, "b"), 2, refuted));
  CHECK(!applicable_P(t, t.rules[0], lit(t, "b"), 2, proved));
  CHECK(discarded(t, t.rules[0], lit(t, "b"), 2, proved));

  SECTION("mixed chain composes both prefix clauses") {
    Theory m = parse_ok("fact ~a.\nfact ~b.\nrule r: =>O a (x) b (o) c.\n");
    ProofState s;
    s.plus_dO.insert(lit(m, "a"));
    s.plus_dO.insert(lit(m, "b"));
    CHECK(applicable_P(m, m.rules[0], lit(m, "c"), 3, s));
  }
}

TEST_CASE("discardedness base cases") {
  Theory t = parse_ok("rule r: =>O q.\n");
  ProofState s;
  CHECK(!discarded(t, t.rules[0], lit(t, "q"), 1, s));
  CHECK(applicable_O(t, t.rules[0], lit(t, "q"), 1, s));
}

TEST_CASE("park: conflicting unresolved obligations leave both refuted") {
  Theory t = parse_ok(
      "fact Park.\nfact Vehicle.\nfact Emergency.\n"
      "rule r1: Park, Vehicle =>O ~Enter.\n"
      "rule r2: Park, Emergency =>O Enter.\n");
  Extension e = oracle_extension(t);
  CHECK(in(e.minus_dO, t, "Enter"));
  CHECK(in(e.minus_dO, t, "~Enter"));
  CHECK(!in(e.plus_dO, t, "Enter"));
  CHECK(!in(e.plus_dO, t, "~Enter"));
}

TEST_CASE("weekend: a defeater blocks without proving") {
  Theory t = parse_ok(
      "fact Weekend.\nfact AirPollution.\nfact Emergency.\n"
      "rule r1: Weekend, AirPollution =>O ~UseCar.\n"
      "rule r2: Weekend, Emergency ~> UseCar.\n");
  Extension e = oracle_extension(t);
  CHECK(in(e.minus_dO, t, "~UseCar"));
  CHECK(!in(e.plus_dO, t, "UseCar"));
  CHECK(in(e.minus_dO, t, "UseCar"));
}

TEST_CASE("copyright: second permission in the chain stays blocked") {
  Theory t = parse_ok(
      "fact infringement.\nfact beforeJudgment.\n"
      "rule r: infringement, beforeJudgment =>P ActualDamages (o) StatutoryDamages.\n");
  Extension e = oracle_extension(t);
  CHECK(in(e.plus_dP, t, "ActualDamages"));
  CHECK(in(e.minus_dP, t, "StatutoryDamages"));
}

TEST_CASE("credit-act: the licence exception flips prohibition to permission") {
  const std::string base =
      "rule r1: =>O ~CreditActivity (x) CivilPenalty.\n"
      "rule r2: CreditLicence =>P CreditActivity.\n"
      "sup r2 > r1.\n";
  SECTION("without the licence the prohibition stands") {
    Theory t = parse_ok(base);
    Extension e = oracle_extension(t);
    CHECK(in(e.plus_dO, t, "~CreditActivity"));
    CHECK(in(e.minus_dP, t, "CreditActivity"));
  }
  SECTION("with the licence the permission wins") {
    Theory t = parse_ok(base + "fact CreditLicence.\n");
    Extension e = oracle_extension(t);
    CHECK(in(e.plus_dP, t, "CreditActivity"));
    CHECK(in(e.minus_dO, t, "~CreditActivity"));
    CHECK(in(e.minus_dO, t, "CivilPenalty"));
  }
}

TEST_CASE("self-referential obligations stay undetermined") {
  Theory t = parse_ok("rule r: O(a) =>O a.\n");
  Extension e = oracle_extension(t);
  CHECK(in(e.undetermined_O, t, "a"));
  CHECK(!in(e.plus_dO, t, "a"));
  CHECK(!in(e.minus_dO, t, "a"));
}

TEST_CASE("defeater modes change what can support a permission") {
  const std::string text = "fact w.\nrule d: w ~> Smoke.\nrule p: w =>P Chew.\n";
  Theory t = parse_ok(text);
  SECTION("rules-only: the defeater supports nothing") {
    Extension e = oracle_extension(t, {DefeaterMode::RulesOnly, false});
    CHECK(in(e.minus_dP, t, "Smoke"));
    CHECK(in(e.plus_dP, t, "Chew"));
  }
  SECTION("defeaters-in-rp: the defeater also supports") {
    Extension e = oracle_extension(t, {DefeaterMode::DefeatersInRP, false});
    CHECK(in(e.plus_dP, t, "Smoke"));
    CHECK(in(e.plus_dP, t, "Chew"));
  }
  SECTION("defeaters-only: rule heads stop supporting") {
    Extension e = oracle_extension(t, {DefeaterMode::DefeatersOnly, false});
    CHECK(in(e.plus_dP, t, "Smoke"));
    CHECK(in(e.minus_dP, t, "Chew"));
  }
}

TEST_CASE("weak-permission antecedent reading") {
  // P(a) as an antecedent item: a is only weakly permitted here
  const std::string text = "rule r: P(a) =>O b.\n";
  Theory t = parse_ok(text);
  {
    Extension e = oracle_extension(t, {DefeaterMode::RulesOnly, false});
    CHECK(in(e.minus_dO, t, "b"));  // P(a) not derivable: -dP a, so r discarded
  }
  {
    Extension e = oracle_extension(t, {DefeaterMode::RulesOnly, true});
    CHECK(in(e.plus_dO, t, "b"));  // -dO ~a holds, so P(a) is weakly satisfied
  }
}

TEST_CASE("no occurrence is both applicable and discarded at fixpoint") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    GenParams p;
    p.seed = seed;
    Theory t = generate_theory(p);
    if (!check_consistency(t).consistent) continue;
    Oracle o(t);
    o.run();
    CHECK(o.applicability_invariant_holds());
  }
}

TEST_CASE("oracle extension is invariant under rule reordering") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    GenParams p;
    p.seed = seed;
    Theory t = generate_theory(p);
    Extension base = oracle_extension(t);
    Theory shuffled = t;
    std::shuffle(shuffled.rules.begin(), shuffled.rules.end(), rng);
    CHECK(oracle_extension(shuffled) == base);
  }
}
