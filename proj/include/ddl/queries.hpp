// ============================================================================
// ddl/queries.hpp — Semantic queries: consistency, weak permission, explain
// ============================================================================

#ifndef DDL_QUERIES_HPP
#define DDL_QUERIES_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ddl/model.hpp"
#include "ddl/oracle.hpp"

namespace ddl {

// ---------------------------------------------------------------------------
// Consistency
// ---------------------------------------------------------------------------

struct ConsistencyViolation {
  enum class Kind { CyclicSuperiority, ComplementaryFacts, OClashFacts };
  Kind kind;
  std::string detail;
};

/// Consistency: > acyclic and F free of complementary pairs {O l, ¬O l},
/// {P l, ¬P l}, {l, ∼l}.  O-consistency additionally forbids {O l, O ∼l}
/// and {O l, P ∼l}.
struct ConsistencyReport {
  bool consistent = true;
  bool o_consistent = true;
  std::vector<ConsistencyViolation> violations;
};

inline ConsistencyReport check_consistency(const Theory& t) {
  ConsistencyReport rep;

  // cycle detection on the superiority digraph (DFS, three colors)
  {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [w, l] : t.sup.pairs) adj[w].push_back(l);
    std::map<std::string, int> color;  // 0 white, 1 grey, 2 black
    std::vector<std::pair<std::string, std::size_t>> stack;
    for (const auto& [start, _] : adj) {
      if (color[start]) continue;
      stack.push_back({start, 0});
      color[start] = 1;
      while (!stack.empty()) {
        auto& [node, idx] = stack.back();
        auto& next = adj[node];
        if (idx < next.size()) {
          const std::string& n = next[idx++];
          if (color[n] == 1) {
            rep.consistent = false;
            rep.violations.push_back({ConsistencyViolation::Kind::CyclicSuperiority,
                                      "cycle through '" + n + "'"});
            color[n] = 2;  // report each cycle entry once
          } else if (color[n] == 0) {
            color[n] = 1;
            stack.push_back({n, 0});
          }
        } else {
          color[node] = 2;
          stack.pop_back();
        }
      }
    }
  }

  auto add = [&](ConsistencyViolation::Kind kind, const Item& a, const Item& b) {
    rep.violations.push_back(
        {kind, "{" + item_string(t.symbols, a) + ", " + item_string(t.symbols, b) + "}"});
    if (kind == ConsistencyViolation::Kind::OClashFacts) rep.o_consistent = false;
    else rep.consistent = false;
  };

  for (const Item& f : t.facts) {
    const Lit l = f.lit;
    const Lit nl = complement_literal(l);
    switch (f.kind) {
      case Item::Kind::Plain:
        if (l.positive && t.has_fact(Item::plain(nl)))
          add(ConsistencyViolation::Kind::ComplementaryFacts, f, Item::plain(nl));
        break;
      case Item::Kind::Obl:
        if (t.has_fact(Item::not_obl(l)))
          add(ConsistencyViolation::Kind::ComplementaryFacts, f, Item::not_obl(l));
        if (l.positive && t.has_fact(Item::obl(nl)))
          add(ConsistencyViolation::Kind::OClashFacts, f, Item::obl(nl));
        if (t.has_fact(Item::perm(nl)))
          add(ConsistencyViolation::Kind::OClashFacts, f, Item::perm(nl));
        break;
      case Item::Kind::Perm:
        if (t.has_fact(Item::not_perm(l)))
          add(ConsistencyViolation::Kind::ComplementaryFacts, f, Item::not_perm(l));
        break;
      default:
        break;
    }
  }
  if (!rep.consistent) rep.o_consistent = false;
  return rep;
}

// ---------------------------------------------------------------------------
// Weak permission
// ---------------------------------------------------------------------------

/// l is weakly permitted iff its complement is refuted as an obligation.
inline bool is_weakly_permitted(const Extension& e, Lit l) {
  return e.minus_dO.count(complement_literal(l)) > 0;
}

// ---------------------------------------------------------------------------
// Explanation traces
// ---------------------------------------------------------------------------

struct QueryTarget {
  bool plus = true;
  Modality modality = Modality::Obligation;
  Lit literal;
};

struct ProofTrace {
  std::string conclusion;               // e.g. "+dO CreditActivity" or a leaf note
  std::string clause;                   // proof-condition clause label ("2.2", ...)
  std::optional<std::string> rule_used;
  std::vector<ProofTrace> children;
};

struct NotDerivable {
  std::string reason;
};

inline std::string tag_string(bool plus, Modality m) {
  return std::string(plus ? "+" : "-") + (m == Modality::Obligation ? "dO" : "dP");
}

namespace detail {

inline ProofTrace trace_from(const Oracle& o, const SymbolTable& syms, bool plus, Modality m,
                             Lit l);

inline void attach_justification(const Oracle& o, const SymbolTable& syms, ProofTrace& node,
                                 const Justification& j) {
  node.clause = j.clause;
  node.rule_used = j.rule;
  for (const auto& [p, m, l] : j.premises)
    node.children.push_back(trace_from(o, syms, p, m, l));
  for (const auto& n : j.notes)
    node.children.push_back(ProofTrace{n, "fact", std::nullopt, {}});
  for (const auto& c : j.children) {
    ProofTrace sub;
    sub.conclusion = c.rule ? ("attacker " + *c.rule) : "attacker";
    attach_justification(o, syms, sub, c);
    sub.conclusion = c.rule ? ("attacker " + *c.rule) : "attacker";
    node.children.push_back(std::move(sub));
  }
}

inline ProofTrace trace_from(const Oracle& o, const SymbolTable& syms, bool plus, Modality m,
                             Lit l) {
  ProofTrace node;
  node.conclusion = tag_string(plus, m) + " " + lit_string(syms, l);
  auto just = o.justify(plus, m, l);
  if (just) attach_justification(o, syms, node, *just);
  return node;
}

}  // namespace detail

/// Builds an explanation for a tagged conclusion by replaying the oracle's
/// proof conditions.  NotDerivable when the target is undetermined or holds
/// with the opposite sign only.
inline std::variant<ProofTrace, NotDerivable> explain(const Theory& t, EngineConfig cfg,
                                                      const QueryTarget& target) {
  Oracle o(t, cfg);
  o.run();
  if (!o.proved(target.plus, target.modality, target.literal)) {
    std::string why =
        o.proved(!target.plus, target.modality, target.literal)
            ? "the opposite sign is derivable"
            : "the literal is in the undetermined residue";
    return NotDerivable{why};
  }
  return detail::trace_from(o, t.symbols, target.plus, target.modality, target.literal);
}

inline std::string trace_to_text(const ProofTrace& tr, int indent = 0) {
  std::string out(static_cast<std::size_t>(indent) * 2, ' ');
  out += tr.conclusion;
  if (!tr.clause.empty()) out += "  [clause " + tr.clause + (tr.rule_used ? ", rule " + *tr.rule_used : "") + "]";
  out += "\n";
  for (const auto& c : tr.children) out += trace_to_text(c, indent + 1);
  return out;
}

inline nlohmann::ordered_json trace_to_json(const ProofTrace& tr) {
  nlohmann::ordered_json j;
  j["conclusion"] = tr.conclusion;
  j["clause"] = tr.clause;
  j["rule"] = tr.rule_used ? nlohmann::ordered_json(*tr.rule_used) : nlohmann::ordered_json(nullptr);
  j["children"] = nlohmann::ordered_json::array();
  for (const auto& c : tr.children) j["children"].push_back(trace_to_json(c));
  return j;
}

}  // namespace ddl

#endif  // DDL_QUERIES_HPP
