// Consistency checking, weak permission, and explanation traces.

#include <catch2/catch_amalgamated.hpp>

#include "ddl/engine.hpp"
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

}  // namespace

TEST_CASE("consistency checking") {
  SECTION("empty theory is consistent") {
    ConsistencyReport rep = check_consistency(Theory{});
    CHECK(rep.consistent);
    CHECK(rep.o_consistent);
    CHECK(rep.violations.empty());
  }
  SECTION("obligation and opposite permission break only O-consistency") {
    Theory t = parse_ok("fact O(a).\nfact P(~a).\n");
    ConsistencyReport rep = check_consistency(t);
    CHECK(rep.consistent);
    CHECK(!rep.o_consistent);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].kind == ConsistencyViolation::Kind::OClashFacts);
  }
  SECTION("complementary plain facts break consistency") {
    Theory t = parse_ok("fact a.\nfact ~a.\n");
    ConsistencyReport rep = check_consistency(t);
    CHECK(!rep.consistent);
    CHECK(!rep.o_consistent);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].kind == ConsistencyViolation::Kind::ComplementaryFacts);
  }
  SECTION("modal clash O / !O") {
    Theory t = parse_ok("fact O(a).\nfact !O(a).\n");
    CHECK(!check_consistency(t).consistent);
  }
  SECTION("a two-cycle in the superiority relation") {
    Theory t = parse_ok("rule r1: =>O a.\nrule r2: =>O b.\nsup r1 > r2.\nsup r2 > r1.\n");
    ConsistencyReport rep = check_consistency(t);
    CHECK(!rep.consistent);
    REQUIRE(!rep.violations.empty());
    CHECK(rep.violations[0].kind == ConsistencyViolation::Kind::CyclicSuperiority);
  }
  SECTION("acyclic superiority passes") {
    Theory t = parse_ok(
        "rule r1: =>O a.\nrule r2: =>O b.\nrule r3: =>O c.\n"
        "sup r1 > r2.\nsup r2 > r3.\nsup r1 > r3.\n");
    CHECK(check_consistency(t).consistent);
  }
}

TEST_CASE("weak permission reads off the refuted complement") {
  Theory t = parse_ok(
      "fact Park.\nfact Vehicle.\nfact Emergency.\n"
      "rule r1: Park, Vehicle =>O ~Enter.\n"
      "rule r2: Park, Emergency =>O Enter.\n");
  Extension e = compute_extension(t).extension;
  // both conflicting obligations are refuted, so both sides are weakly permitted
  CHECK(is_weakly_permitted(e, lit(t, "Enter")));
  CHECK(is_weakly_permitted(e, lit(t, "~Enter")));
  // a literal whose complement is underived but not refuted is not
  Theory loop = parse_ok("rule r: O(a) =>O a.\n");
  Extension le = compute_extension(loop).extension;
  CHECK(!is_weakly_permitted(le, lit(loop, "~a")));
}

TEST_CASE("explanations replay the winning proof condition") {
  Theory t = parse_ok(
      "fact CreditLicence.\n"
      "rule r1: =>O ~CreditActivity (x) CivilPenalty.\n"
      "rule r2: CreditLicence =>P CreditActivity.\n"
      "sup r2 > r1.\n");
  auto res = explain(t, {}, QueryTarget{true, Modality::Permission, lit(t, "CreditActivity")});
  REQUIRE(std::holds_alternative<ProofTrace>(res));
  const ProofTrace& tr = std::get<ProofTrace>(res);
  CHECK(tr.conclusion == "+dP CreditActivity");
  CHECK(tr.clause.substr(0, 1) == "2");
  REQUIRE(tr.rule_used.has_value());
  CHECK(*tr.rule_used == "r2");
  CHECK(!tr.children.empty());

  std::string text = trace_to_text(tr);
  CHECK(text.find("+dP CreditActivity") != std::string::npos);
  CHECK(text.find("r2") != std::string::npos);

  auto j = trace_to_json(tr);
  CHECK(j["conclusion"] == "+dP CreditActivity");
  CHECK(j.contains("children"));
}

TEST_CASE("refutation traces carry the blocked attempts") {
  Theory t = parse_ok(
      "fact CreditLicence.\n"
      "rule r1: =>O ~CreditActivity (x) CivilPenalty.\n"
      "rule r2: CreditLicence =>P CreditActivity.\n"
      "sup r2 > r1.\n");
  auto res = explain(t, {}, QueryTarget{false, Modality::Obligation, lit(t, "~CreditActivity")});
  REQUIRE(std::holds_alternative<ProofTrace>(res));
  CHECK(std::get<ProofTrace>(res).conclusion == "-dO ~CreditActivity");
}

TEST_CASE("not-derivable cases distinguish their reason") {
  SECTION("literal absent from the theory") {
    Theory t = parse_ok("rule r: =>O a.\n");
    Theory probe = t;
    Lit ghost{probe.symbols.intern("ghost"), true};
    auto res = explain(probe, {}, QueryTarget{true, Modality::Obligation, ghost});
    REQUIRE(std::holds_alternative<NotDerivable>(res));
  }
  SECTION("undetermined self-referential literal") {
    Theory t = parse_ok("rule r: O(a) =>O a.\n");
    auto res = explain(t, {}, QueryTarget{true, Modality::Obligation, lit(t, "a")});
    REQUIRE(std::holds_alternative<NotDerivable>(res));
    CHECK(std::get<NotDerivable>(res).reason.find("undetermined") != std::string::npos);
  }
  SECTION("opposite sign holds") {
    Theory t = parse_ok("rule r: =>O a.\n");
    auto res = explain(t, {}, QueryTarget{false, Modality::Obligation, lit(t, "a")});
    REQUIRE(std::holds_alternative<NotDerivable>(res));
    CHECK(std::get<NotDerivable>(res).reason.find("opposite") != std::string::npos);
  }
}

TEST_CASE("positive obligation trace cites its supporting rule") {
  Theory t = parse_ok("fact w.\nrule r: w =>O a.\n");
  auto res = explain(t, {}, QueryTarget{true, Modality::Obligation, lit(t, "a")});
  REQUIRE(std::holds_alternative<ProofTrace>(res));
  const ProofTrace& tr = std::get<ProofTrace>(res);
  REQUIRE(tr.rule_used.has_value());
  CHECK(*tr.rule_used == "r");
}
