// ============================================================================
// ddl/generator.hpp — Seeded random theory generation
// ============================================================================
//
// Deterministic per seed.  Generated fact sets avoid the complementary and
// O-clash pairs (the propositions and the engine/oracle agreement are stated
// for consistent inputs), and superiority pairs always point from a lower
// rule index to a higher one, so > is acyclic by construction.
//
// ============================================================================

#ifndef DDL_GENERATOR_HPP
#define DDL_GENERATOR_HPP

#include <cstdint>
#include <random>
#include <string>

#include "ddl/model.hpp"

namespace ddl {

struct GenParams {
  int atoms = 8;
  int rules = 12;
  int max_antecedent = 3;
  int max_chain = 4;
  double p_defeater = 0.15;
  double p_perm_rule = 0.30;
  double p_modal_antecedent = 0.45;
  double p_fact = 0.45;
  double sup_density = 0.25;
  std::uint64_t seed = 0;
};

namespace detail {

/// Would adding `c` to a fact set containing `f` break (O-)consistency?
inline bool facts_clash(const Item& c, const Item& f) {
  auto pair_is = [&](Item::Kind ka, Item::Kind kb, bool complemented) {
    const bool direct = c.kind == ka && f.kind == kb &&
                        f.lit == (complemented ? complement_literal(c.lit) : c.lit);
    const bool swapped = c.kind == kb && f.kind == ka &&
                         c.lit == (complemented ? complement_literal(f.lit) : f.lit);
    return direct || swapped;
  };
  return pair_is(Item::Kind::Plain, Item::Kind::Plain, true) ||
         pair_is(Item::Kind::Obl, Item::Kind::NotObl, false) ||
         pair_is(Item::Kind::Perm, Item::Kind::NotPerm, false) ||
         pair_is(Item::Kind::Obl, Item::Kind::Obl, true) ||
         pair_is(Item::Kind::Obl, Item::Kind::Perm, true);
}

}  // namespace detail

inline Theory generate_theory(const GenParams& p) {
  std::mt19937_64 rng(p.seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull);
  auto chance = [&](double prob) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < prob;
  };
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };

  Theory t;
  std::vector<AtomId> atoms;
  for (int i = 0; i < p.atoms; ++i) atoms.push_back(t.symbols.intern("a" + std::to_string(i)));
  auto rand_lit = [&]() { return Lit{atoms[static_cast<std::size_t>(pick(p.atoms))], chance(0.5)}; };
  auto rand_item = [&](double p_modal) {
    Lit l = rand_lit();
    if (!chance(p_modal)) return Item::plain(l);
    switch (pick(4)) {
      case 0: return Item::obl(l);
      case 1: return Item::perm(l);
      case 2: return Item::not_obl(l);
      default: return Item::not_perm(l);
    }
  };

  // facts, kept consistent pair-by-pair
  for (int i = 0; i < p.atoms; ++i) {
    if (!chance(p.p_fact)) continue;
    Item cand = rand_item(0.6);
    bool clash = false;
    for (const Item& f : t.facts)
      if (detail::facts_clash(cand, f)) { clash = true; break; }
    if (!clash) t.facts.push_back(cand);
  }
  std::sort(t.facts.begin(), t.facts.end());
  t.facts.erase(std::unique(t.facts.begin(), t.facts.end()), t.facts.end());

  for (int i = 0; i < p.rules; ++i) {
    Rule r;
    r.label = "r" + std::to_string(i);
    if (chance(p.p_defeater)) r.kind = RuleKind::Defeater;
    else if (chance(p.p_perm_rule)) r.kind = RuleKind::PermissionRule;
    else r.kind = RuleKind::ObligationRule;

    const int nant = pick(p.max_antecedent + 1);
    for (int k = 0; k < nant; ++k) {
      Item it = rand_item(p.p_modal_antecedent);
      // bias plain items toward actual facts so rules can fire
      if (it.kind == Item::Kind::Plain && chance(0.6)) {
        std::vector<Item> plain;
        for (const Item& f : t.facts)
          if (f.kind == Item::Kind::Plain) plain.push_back(f);
        if (!plain.empty()) it = plain[static_cast<std::size_t>(pick(static_cast<int>(plain.size())))];
      }
      r.antecedent.push_back(it);
    }
    normalize_antecedent(r.antecedent);

    const int len = r.kind == RuleKind::Defeater ? 1 : 1 + pick(p.max_chain);
    for (int k = 0; k < len; ++k) r.head.elements.push_back(rand_lit());
    r.head.otimes_len =
        r.kind == RuleKind::PermissionRule ? 0 : 1 + pick(static_cast<int>(r.head.elements.size()));
    if (r.kind == RuleKind::Defeater) r.head.otimes_len = 1;
    r.head = chain_normalize(r.head);
    t.rules.push_back(std::move(r));
  }

  // acyclic by construction: winner index strictly below loser index
  for (int i = 0; i < p.rules; ++i)
    for (int j = i + 1; j < p.rules; ++j)
      if (chance(p.sup_density * 2.0 / std::max(1, p.rules)))
        t.sup.pairs.insert({t.rules[static_cast<std::size_t>(i)].label,
                            t.rules[static_cast<std::size_t>(j)].label});
  return t;
}

}  // namespace ddl

#endif  // DDL_GENERATOR_HPP
