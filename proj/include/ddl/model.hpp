// ============================================================================
// ddl/model.hpp — Vocabulary of modal defeasible theories
// ============================================================================
//
// Literals, modal literals, reparation chains, rules and theories, together
// with the pure chain algebra (complement, normalization, truncation,
// removal) that the inference engine and the proof-condition checker share.
//
// Atoms are interned to dense integer ids so that literal comparison and
// every per-literal index lookup is constant time.  All values here are
// immutable once a Theory is built; operations are pure functions.
//
// ============================================================================

#ifndef DDL_MODEL_HPP
#define DDL_MODEL_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ddl {

// ---------------------------------------------------------------------------
// Atoms and literals
// ---------------------------------------------------------------------------

using AtomId = std::int32_t;

/// Interner mapping atom names to dense ids.  Names are case-sensitive.
class SymbolTable {
public:
  AtomId intern(std::string_view name) {
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    AtomId id = static_cast<AtomId>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
  }

  std::optional<AtomId> lookup(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(AtomId id) const { return names_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return names_.size(); }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, AtomId> ids_;
};

/// A classical literal: an atom with a polarity.
struct Lit {
  AtomId atom = 0;
  bool positive = true;

  friend bool operator==(const Lit&, const Lit&) = default;
  friend auto operator<=>(const Lit&, const Lit&) = default;
};

/// ∼q: flips the polarity.  Involution.
inline Lit complement_literal(Lit q) { return Lit{q.atom, !q.positive}; }

/// Dense encoding of a literal: 2*atom for positive, 2*atom+1 for negative.
inline std::int32_t lit_code(Lit q) { return q.atom * 2 + (q.positive ? 0 : 1); }
inline Lit lit_from_code(std::int32_t c) { return Lit{c / 2, (c % 2) == 0}; }
inline std::int32_t comp_code(std::int32_t c) { return c ^ 1; }

enum class Modality : std::uint8_t { Obligation, Permission };

/// An antecedent item: a plain literal, or a modal literal □l / ¬□l.
/// Nested modalities are unrepresentable by construction.
struct Item {
  enum class Kind : std::uint8_t { Plain, Obl, Perm, NotObl, NotPerm };

  Kind kind = Kind::Plain;
  Lit lit;

  friend bool operator==(const Item&, const Item&) = default;
  friend auto operator<=>(const Item&, const Item&) = default;

  static Item plain(Lit l) { return Item{Kind::Plain, l}; }
  static Item obl(Lit l) { return Item{Kind::Obl, l}; }
  static Item perm(Lit l) { return Item{Kind::Perm, l}; }
  static Item not_obl(Lit l) { return Item{Kind::NotObl, l}; }
  static Item not_perm(Lit l) { return Item{Kind::NotPerm, l}; }

  bool is_modal() const { return kind != Kind::Plain; }
};

/// Dense encoding of an item (5 kinds per literal code).
inline std::int64_t item_code(const Item& it) {
  return static_cast<std::int64_t>(lit_code(it.lit)) * 5 + static_cast<int>(it.kind);
}

/// The complement set of an item (tilde).  Note the asymmetric permission
/// cases: the complement of ¬P m is {P m} alone, because failing to derive
/// P m can only come from O ∼m being the case, not from O m.
inline std::vector<Item> complement_set(const Item& it) {
  const Lit m = it.lit;
  const Lit nm = complement_literal(m);
  switch (it.kind) {
    case Item::Kind::Plain:   return {Item::plain(nm)};
    case Item::Kind::Obl:     return {Item::not_obl(m), Item::obl(nm), Item::perm(nm)};
    case Item::Kind::NotObl:  return {Item::obl(m)};
    case Item::Kind::Perm:    return {Item::not_perm(m), Item::obl(nm)};
    case Item::Kind::NotPerm: return {Item::perm(m)};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Chains and rules
// ---------------------------------------------------------------------------

/// A reparation chain: a leading ⊗-segment followed by an ⊙-segment.
/// Indices are 1-based throughout, matching "appears at index n".
struct Chain {
  std::vector<Lit> elements;
  int otimes_len = 0;  // number of leading elements joined by ⊗

  friend bool operator==(const Chain&, const Chain&) = default;

  int length() const { return static_cast<int>(elements.size()); }

  /// 1-based index of the first occurrence of q, or 0 if absent.
  int index_of(Lit q) const {
    for (int i = 0; i < length(); ++i)
      if (elements[static_cast<std::size_t>(i)] == q) return i + 1;
    return 0;
  }
};

/// Contraction on the right: drops every literal occurrence that duplicates
/// an earlier one (the leftmost occurrence survives).  Idempotent, order
/// preserving.
inline Chain chain_normalize(const Chain& c) {
  Chain out;
  out.otimes_len = 0;
  std::set<Lit> seen;
  for (int i = 0; i < c.length(); ++i) {
    const Lit& l = c.elements[static_cast<std::size_t>(i)];
    if (seen.insert(l).second) {
      out.elements.push_back(l);
      if (i < c.otimes_len) ++out.otimes_len;
    }
  }
  return out;
}

enum class RuleKind : std::uint8_t { ObligationRule, PermissionRule, Defeater };

/// r : A(r) ↪ C(r).  Permission rules carry a pure ⊙-chain (otimes_len 0);
/// defeaters carry a single-literal head.
struct Rule {
  std::string label;
  std::vector<Item> antecedent;  // kept sorted and duplicate-free
  RuleKind kind = RuleKind::ObligationRule;
  Chain head;

  friend bool operator==(const Rule&, const Rule&) = default;
};

inline void normalize_antecedent(std::vector<Item>& items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
}

/// Truncation C(r)!a: keeps the prefix ending at a inclusive.  Total: a rule
/// whose head does not mention a is returned unchanged.
inline Rule chain_truncate(Rule r, Lit a) {
  int idx = r.head.index_of(a);
  if (idx == 0) return r;
  r.head.elements.resize(static_cast<std::size_t>(idx));
  r.head.otimes_len = std::min(r.head.otimes_len, idx);
  return r;
}

/// Removal C(r) ⊖ a.  Implements the four-case table; in particular removing
/// the sole ⊗-element in front of ⊙-content flips the rule kind O → P.
/// Removal that empties the head deletes the rule (nullopt); a miss is the
/// identity.
inline std::optional<Rule> rule_remove(Rule r, Lit a) {
  int idx = r.head.index_of(a);
  if (idx == 0) return r;
  r.head.elements.erase(r.head.elements.begin() + (idx - 1));
  if (idx <= r.head.otimes_len) --r.head.otimes_len;
  if (r.head.elements.empty()) return std::nullopt;
  if (r.kind == RuleKind::ObligationRule && r.head.otimes_len == 0)
    r.kind = RuleKind::PermissionRule;
  return r;
}

// ---------------------------------------------------------------------------
// Superiority and theories
// ---------------------------------------------------------------------------

/// The superiority relation as (winner, loser) label pairs.  Acyclicity is a
/// consistency property checked by queries, not enforced by construction.
struct Superiority {
  std::set<std::pair<std::string, std::string>> pairs;

  friend bool operator==(const Superiority&, const Superiority&) = default;

  bool beats(const std::string& winner, const std::string& loser) const {
    return pairs.count({winner, loser}) > 0;
  }
};

/// D = (F, R, >).  Finite by construction.
struct Theory {
  SymbolTable symbols;
  std::vector<Item> facts;  // sorted, duplicate-free
  std::vector<Rule> rules;
  Superiority sup;

  bool has_fact(const Item& it) const {
    return std::binary_search(facts.begin(), facts.end(), it);
  }

  const Rule* find_rule(const std::string& label) const {
    for (const auto& r : rules)
      if (r.label == label) return &r;
    return nullptr;
  }
};

/// Equality up to rule ordering (facts and sup are canonical already).
inline bool theories_equal(const Theory& a, const Theory& b) {
  auto names = [](const Theory& t, const std::vector<Item>& items) {
    std::set<std::tuple<int, std::string, bool>> out;
    for (const auto& it : items)
      out.insert({static_cast<int>(it.kind), t.symbols.name(it.lit.atom), it.lit.positive});
    return out;
  };
  if (names(a, a.facts) != names(b, b.facts)) return false;
  auto rule_key = [](const Theory& t, const Rule& r) {
    std::string k = r.label + "|" + std::to_string(static_cast<int>(r.kind)) + "|";
    std::set<std::string> ants;
    for (const auto& it : r.antecedent)
      ants.insert(std::to_string(static_cast<int>(it.kind)) + ":" +
                  (it.lit.positive ? "" : "~") + t.symbols.name(it.lit.atom));
    for (const auto& s : ants) k += s + ",";
    k += "|" + std::to_string(r.head.otimes_len) + "|";
    for (const auto& l : r.head.elements)
      k += (l.positive ? "" : "~") + t.symbols.name(l.atom) + ",";
    return k;
  };
  std::multiset<std::string> ra, rb;
  for (const auto& r : a.rules) ra.insert(rule_key(a, r));
  for (const auto& r : b.rules) rb.insert(rule_key(b, r));
  if (ra != rb) return false;
  auto sups = [](const Theory& t) {
    (void)t;
    return t.sup.pairs;
  };
  return sups(a) == sups(b);
}

/// Atoms actually occurring in D (facts, antecedents, heads).  The Herbrand
/// base HB_D is both polarities of each of these; the modal Herbrand base is
/// {O l, P l} over HB_D.
inline std::set<AtomId> used_atoms(const Theory& t) {
  std::set<AtomId> out;
  for (const auto& f : t.facts) out.insert(f.lit.atom);
  for (const auto& r : t.rules) {
    for (const auto& it : r.antecedent) out.insert(it.lit.atom);
    for (const auto& l : r.head.elements) out.insert(l.atom);
  }
  return out;
}

struct HerbrandEntry {
  Modality modality;
  Lit literal;
  friend auto operator<=>(const HerbrandEntry&, const HerbrandEntry&) = default;
};

// ---------------------------------------------------------------------------
// Selector tags (R^O[q,n] / R^P[q,n] membership)
// ---------------------------------------------------------------------------

/// How defeaters participate in R^P.  RulesOnly is the base logic; the two
/// variants let defeaters support (or monopolise) strong permission.
enum class DefeaterMode : std::uint8_t { RulesOnly, DefeatersInRP, DefeatersOnly };

struct EngineConfig {
  DefeaterMode defeater_mode = DefeaterMode::RulesOnly;
  bool weak_perm_antecedent = false;
};

enum class SegTag : std::uint8_t { O, P, None };

/// Tag of the head occurrence at 1-based index `index1`:
///  - ⊗-segment positions of obligation rules are always in R^O;
///  - ⊙-preceded positions (and index 1 of permission rules) are in R^P,
///    except under DefeatersOnly where only defeaters populate R^P;
///  - defeater heads are outside both selectors in the base mode.
inline SegTag head_tag(RuleKind kind, int index1, int otimes_len, DefeaterMode mode) {
  switch (kind) {
    case RuleKind::Defeater:
      return mode == DefeaterMode::RulesOnly ? SegTag::None : SegTag::P;
    case RuleKind::ObligationRule:
      if (index1 <= otimes_len) return SegTag::O;
      return mode == DefeaterMode::DefeatersOnly ? SegTag::None : SegTag::P;
    case RuleKind::PermissionRule:
      return mode == DefeaterMode::DefeatersOnly ? SegTag::None : SegTag::P;
  }
  return SegTag::None;
}

// ---------------------------------------------------------------------------
// Extensions
// ---------------------------------------------------------------------------

/// E(D): the four conclusion sets plus the undetermined residue per modality.
struct Extension {
  std::set<Lit> plus_dO, plus_dP, minus_dO, minus_dP;
  std::set<Lit> undetermined_O, undetermined_P;

  friend bool operator==(const Extension&, const Extension&) = default;
};

inline std::string lit_string(const SymbolTable& syms, Lit l) {
  return (l.positive ? "" : "~") + syms.name(l.atom);
}

inline std::string item_string(const SymbolTable& syms, const Item& it) {
  switch (it.kind) {
    case Item::Kind::Plain:   return lit_string(syms, it.lit);
    case Item::Kind::Obl:     return "O(" + lit_string(syms, it.lit) + ")";
    case Item::Kind::Perm:    return "P(" + lit_string(syms, it.lit) + ")";
    case Item::Kind::NotObl:  return "!O(" + lit_string(syms, it.lit) + ")";
    case Item::Kind::NotPerm: return "!P(" + lit_string(syms, it.lit) + ")";
  }
  return "";
}

}  // namespace ddl

#endif  // DDL_MODEL_HPP
