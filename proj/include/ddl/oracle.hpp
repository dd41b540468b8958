// ============================================================================
// ddl/oracle.hpp — Ground-truth fixpoint over the proof conditions
// ============================================================================
//
// A deliberately direct implementation of defeasible provability and
// refutability for obligation and permission: it repeatedly scans every
// (sign, modality, literal) triple over the Herbrand base and adds any whose
// proof condition evaluates true against the current state, until fixpoint.
// Negative conditions are first-class strong-negation conditions, so loops
// leave their literals undetermined rather than refuted.
//
// No attention is paid to performance; the engine is the fast path and is
// differentially tested against this module.
//
// Each proved triple records its insertion order; justifications replay the
// proof condition against the strictly-earlier state, which guarantees
// finite explanation traces.
//
// ============================================================================

#ifndef DDL_ORACLE_HPP
#define DDL_ORACLE_HPP

#include <cassert>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ddl/model.hpp"

namespace ddl {

/// Hand-seedable proof state for testing the applicability predicates in
/// isolation.
struct ProofState {
  std::set<Lit> plus_dO, minus_dO, plus_dP, minus_dP;
};

/// One step of an explanation: which clause fired, through which rule, on
/// which tagged premises.  `premises` are triples to be expanded recursively
/// by the caller; `notes` are terminal fact/superiority observations;
/// `children` are structural subnodes (attacker resolutions and the like).
struct Justification {
  std::string clause;
  std::optional<std::string> rule;
  std::vector<std::tuple<bool, Modality, Lit>> premises;
  std::vector<std::string> notes;
  std::vector<Justification> children;
};

class Oracle {
public:
  Oracle(const Theory& t, EngineConfig cfg = {}) : t_(t), cfg_(cfg) {
    for (int i = 0; i < static_cast<int>(t_.rules.size()); ++i) {
      const Rule& r = t_.rules[static_cast<std::size_t>(i)];
      for (int j = 1; j <= r.head.length(); ++j) {
        Lit q = r.head.elements[static_cast<std::size_t>(j - 1)];
        SegTag tag = head_tag(r.kind, j, r.head.otimes_len, cfg_.defeater_mode);
        occ_[lit_code(q)].push_back(Occ{i, j, tag});
      }
    }
    for (AtomId a : used_atoms(t_)) {
      hb_.push_back(lit_code(Lit{a, true}));
      hb_.push_back(lit_code(Lit{a, false}));
    }
  }

  /// Runs the scan to fixpoint.
  void run() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int code : hb_) {
        for (int set = 0; set < 4; ++set) {
          const bool plus = set == 0 || set == 2;
          const Modality m = set < 2 ? Modality::Obligation : Modality::Permission;
          if (order_set(plus, m).count(code)) continue;
          if (eval(plus, m, code, kUnbounded, nullptr)) {
            order_set(plus, m).emplace(code, next_order_++);
            changed = true;
          }
        }
      }
    }
  }

  bool proved(bool plus, Modality m, Lit l) const {
    return order_set(plus, m).count(lit_code(l)) > 0;
  }

  Extension extension() const {
    Extension e;
    for (int code : hb_) {
      Lit l = lit_from_code(code);
      if (plusO_.count(code)) e.plus_dO.insert(l);
      if (minusO_.count(code)) e.minus_dO.insert(l);
      if (plusP_.count(code)) e.plus_dP.insert(l);
      if (minusP_.count(code)) e.minus_dP.insert(l);
      if (!plusO_.count(code) && !minusO_.count(code)) e.undetermined_O.insert(l);
      if (!plusP_.count(code) && !minusP_.count(code)) e.undetermined_P.insert(l);
    }
    return e;
  }

  /// Replays the proof condition of a proved triple against the state as it
  /// was just before that triple was added, recording the firing clause.
  std::optional<Justification> justify(bool plus, Modality m, Lit l) const {
    auto it = order_set(plus, m).find(lit_code(l));
    if (it == order_set(plus, m).end()) return std::nullopt;
    Justification j;
    bool ok = eval(plus, m, lit_code(l), it->second, &j);
    assert(ok);
    (void)ok;
    return j;
  }

  /// Seeds the proved sets directly (all entries at order 0; use bound-free
  /// evaluation afterwards).  Testing hook for the applicability predicates.
  void seed(const ProofState& s) {
    for (Lit l : s.plus_dO) plusO_.emplace(lit_code(l), 0);
    for (Lit l : s.minus_dO) minusO_.emplace(lit_code(l), 0);
    for (Lit l : s.plus_dP) plusP_.emplace(lit_code(l), 0);
    for (Lit l : s.minus_dP) minusP_.emplace(lit_code(l), 0);
  }

  /// Applicability of r for q at head index j against the current state.
  bool applicable(const Rule& r, Lit q, int j) const {
    return applicable_at(r, j, kUnbounded, nullptr) && r.head.index_of(q) == j;
  }
  /// Discardedness of r for q at head index j against the current state.
  bool discarded(const Rule& r, Lit q, int j) const {
    return discarded_at(r, j, kUnbounded, nullptr) && r.head.index_of(q) == j;
  }

  /// A rule occurrence must never be simultaneously applicable and discarded
  /// at the same state.  Returns true when the invariant holds everywhere.
  bool applicability_invariant_holds() const {
    for (const auto& [code, occs] : occ_) {
      (void)code;
      for (const Occ& o : occs) {
        const Rule& r = t_.rules[static_cast<std::size_t>(o.rule)];
        if (applicable_at(r, o.index, kUnbounded, nullptr) &&
            discarded_at(r, o.index, kUnbounded, nullptr))
          return false;
      }
    }
    return true;
  }

private:
  static constexpr int kUnbounded = std::numeric_limits<int>::max();

  struct Occ {
    int rule;
    int index;  // 1-based
    SegTag tag;
  };

  const Theory& t_;
  EngineConfig cfg_;
  std::unordered_map<int, std::vector<Occ>> occ_;
  std::vector<int> hb_;
  std::unordered_map<int, int> plusO_, minusO_, plusP_, minusP_;
  int next_order_ = 0;

  std::unordered_map<int, int>& order_set(bool plus, Modality m) {
    if (m == Modality::Obligation) return plus ? plusO_ : minusO_;
    return plus ? plusP_ : minusP_;
  }
  const std::unordered_map<int, int>& order_set(bool plus, Modality m) const {
    if (m == Modality::Obligation) return plus ? plusO_ : minusO_;
    return plus ? plusP_ : minusP_;
  }

  bool have(bool plus, Modality m, int code, int bound) const {
    auto it = order_set(plus, m).find(code);
    return it != order_set(plus, m).end() && it->second < bound;
  }

  bool fact(Item::Kind kind, Lit l) const { return t_.has_fact(Item{kind, l}); }
  bool plain_fact(Lit l) const { return fact(Item::Kind::Plain, l); }

  static void note(Justification* j, std::string s) {
    if (j) j->notes.push_back(std::move(s));
  }
  static void premise(Justification* j, bool plus, Modality m, Lit l) {
    if (j) j->premises.emplace_back(plus, m, l);
  }

  // ---- antecedent clauses --------------------------------------------------

  /// Clause (1): every antecedent item is satisfied.
  bool antecedent_holds(const Rule& r, int bound, Justification* j) const {
    for (const Item& a : r.antecedent) {
      const int code = lit_code(a.lit);
      const int ncode = comp_code(code);
      switch (a.kind) {
        case Item::Kind::Plain:
          if (!plain_fact(a.lit)) return false;
          note(j, "fact " + item_string(t_.symbols, a));
          break;
        case Item::Kind::Obl:
          if (!have(true, Modality::Obligation, code, bound)) return false;
          premise(j, true, Modality::Obligation, a.lit);
          break;
        case Item::Kind::NotObl:
          if (!have(false, Modality::Obligation, code, bound)) return false;
          premise(j, false, Modality::Obligation, a.lit);
          break;
        case Item::Kind::Perm:
          if (have(true, Modality::Permission, code, bound)) {
            premise(j, true, Modality::Permission, a.lit);
          } else if (cfg_.weak_perm_antecedent &&
                     have(false, Modality::Obligation, ncode, bound)) {
            premise(j, false, Modality::Obligation, complement_literal(a.lit));
          } else {
            return false;
          }
          break;
        case Item::Kind::NotPerm:
          if (!have(false, Modality::Permission, code, bound)) return false;
          premise(j, false, Modality::Permission, a.lit);
          break;
      }
    }
    return true;
  }

  /// Strong negation of clause (1): some antecedent item is refuted.
  bool antecedent_fails(const Rule& r, int bound, Justification* j) const {
    for (const Item& a : r.antecedent) {
      const int code = lit_code(a.lit);
      const int ncode = comp_code(code);
      switch (a.kind) {
        case Item::Kind::Plain:
          if (!plain_fact(a.lit)) {
            note(j, item_string(t_.symbols, a) + " is not a fact");
            return true;
          }
          break;
        case Item::Kind::Obl:
          if (have(false, Modality::Obligation, code, bound)) {
            premise(j, false, Modality::Obligation, a.lit);
            return true;
          }
          break;
        case Item::Kind::NotObl:
          if (have(true, Modality::Obligation, code, bound)) {
            premise(j, true, Modality::Obligation, a.lit);
            return true;
          }
          break;
        case Item::Kind::Perm:
          if (cfg_.weak_perm_antecedent) {
            if (have(false, Modality::Permission, code, bound) &&
                have(true, Modality::Obligation, ncode, bound)) {
              premise(j, false, Modality::Permission, a.lit);
              premise(j, true, Modality::Obligation, complement_literal(a.lit));
              return true;
            }
          } else if (have(false, Modality::Permission, code, bound)) {
            premise(j, false, Modality::Permission, a.lit);
            return true;
          }
          break;
        case Item::Kind::NotPerm:
          if (have(true, Modality::Permission, code, bound)) {
            premise(j, true, Modality::Permission, a.lit);
            return true;
          }
          break;
      }
    }
    return false;
  }

  // ---- chain clauses -------------------------------------------------------

  /// Applicability of r at head index `idx` (clauses (1), (2) and, for
  /// ⊙-segment targets, (3)): each ⊗-prefix obligation is derived and
  /// violated, each ⊙-prefix permission is refuted.
  bool applicable_at(const Rule& r, int idx, int bound, Justification* j) const {
    if (!antecedent_holds(r, bound, j)) return false;
    if (r.kind == RuleKind::Defeater) return true;
    const int L = r.head.otimes_len;
    for (int k = 1; k < idx && k <= L; ++k) {
      Lit c = r.head.elements[static_cast<std::size_t>(k - 1)];
      if (!have(true, Modality::Obligation, lit_code(c), bound)) return false;
      if (!(!plain_fact(c) || plain_fact(complement_literal(c)))) return false;
      premise(j, true, Modality::Obligation, c);
      note(j, "obligation " + lit_string(t_.symbols, c) + " violated");
    }
    for (int k = L + 1; k < idx; ++k) {
      Lit c = r.head.elements[static_cast<std::size_t>(k - 1)];
      if (!have(false, Modality::Permission, lit_code(c), bound)) return false;
      premise(j, false, Modality::Permission, c);
    }
    return true;
  }

  /// Discardedness of r at head index `idx` (strong negation of the above).
  bool discarded_at(const Rule& r, int idx, int bound, Justification* j) const {
    if (antecedent_fails(r, bound, j)) return true;
    if (r.kind == RuleKind::Defeater) return false;
    const int L = r.head.otimes_len;
    for (int k = 1; k < idx && k <= L; ++k) {
      Lit c = r.head.elements[static_cast<std::size_t>(k - 1)];
      if (have(false, Modality::Obligation, lit_code(c), bound)) {
        premise(j, false, Modality::Obligation, c);
        return true;
      }
      if (plain_fact(c)) {
        note(j, "obligation " + lit_string(t_.symbols, c) + " fulfilled (fact)");
        return true;
      }
    }
    for (int k = L + 1; k < idx; ++k) {
      Lit c = r.head.elements[static_cast<std::size_t>(k - 1)];
      if (have(true, Modality::Permission, lit_code(c), bound)) {
        premise(j, true, Modality::Permission, c);
        return true;
      }
    }
    return false;
  }

  // ---- occurrence helpers --------------------------------------------------

  const std::vector<Occ>& occurrences(int code) const {
    static const std::vector<Occ> empty;
    auto it = occ_.find(code);
    return it == occ_.end() ? empty : it->second;
  }

  bool kind_O(int rule) const {
    return t_.rules[static_cast<std::size_t>(rule)].kind == RuleKind::ObligationRule;
  }
  const Rule& rule(int i) const { return t_.rules[static_cast<std::size_t>(i)]; }
  bool beats(int winner, int loser) const {
    return t_.sup.beats(rule(winner).label, rule(loser).label);
  }

  /// An occurrence whose modal conclusion is refuted by the facts alone can
  /// neither support nor attack: an O-segment occurrence of x is dead once
  /// O ∼x, ¬O x, or P ∼x is a fact, a P-segment occurrence once O ∼x or
  /// ¬P x is.  (This is what keeps factual settlements on a par with
  /// derived ones in the team-defeat clauses.)
  bool fact_neutralized(SegTag tag, Lit x) const {
    const Lit nx = complement_literal(x);
    if (tag == SegTag::O)
      return fact(Item::Kind::Obl, nx) || fact(Item::Kind::NotObl, x) ||
             fact(Item::Kind::Perm, nx);
    if (tag == SegTag::P)
      return fact(Item::Kind::Obl, nx) || fact(Item::Kind::NotPerm, x);
    return false;
  }

  // ---- proof conditions ----------------------------------------------------

  bool eval(bool plus, Modality m, int code, int bound, Justification* j) const {
    if (m == Modality::Obligation)
      return plus ? eval_plus_O(code, bound, j) : eval_minus_O(code, bound, j);
    return plus ? eval_plus_P(code, bound, j) : eval_minus_P(code, bound, j);
  }

  /// Support clause (2.2) plus the attack clause (2.3) for +∂O q: every rule
  /// for ∼q is discarded or team-defeated — obligation attackers may be
  /// beaten by any rule for q, permission/defeater attackers only by an
  /// obligation rule for q.
  bool eval_plus_O(int code, int bound, Justification* j) const {
    const Lit q = lit_from_code(code);
    const int ncode = comp_code(code);
    const Lit nq = complement_literal(q);
    if (fact(Item::Kind::Obl, q)) {
      if (j) {
        j->clause = "1";
        j->notes.push_back("fact O(" + lit_string(t_.symbols, q) + ")");
      }
      return true;
    }
    // (2.1)
    if (fact(Item::Kind::Obl, nq) || fact(Item::Kind::NotObl, q) || fact(Item::Kind::Perm, nq))
      return false;
    // (2.2)
    const Occ* support = nullptr;
    for (const Occ& o : occurrences(code)) {
      if (o.tag != SegTag::O) continue;
      if (applicable_at(rule(o.rule), o.index, bound, nullptr)) { support = &o; break; }
    }
    if (!support) return false;
    if (j) {
      j->clause = "2.2";
      j->rule = rule(support->rule).label;
      applicable_at(rule(support->rule), support->index, bound, j);
    }
    // (2.3)
    std::vector<Justification> resolutions;
    for (const Occ& s : occurrences(ncode)) {
      if (fact_neutralized(s.tag, nq)) continue;
      Justification res;
      if (discarded_at(rule(s.rule), s.index, bound, j ? &res : nullptr)) {
        if (j) { res.clause = "2.3.1"; res.rule = rule(s.rule).label; resolutions.push_back(res); }
        continue;
      }
      const bool attacker_is_O = kind_O(s.rule);
      bool beaten = false;
      for (const Occ& tocc : occurrences(code)) {
        if (!attacker_is_O && tocc.tag != SegTag::O) continue;
        if (fact_neutralized(tocc.tag, q)) continue;
        if (!beats(tocc.rule, s.rule)) continue;
        if (!applicable_at(rule(tocc.rule), tocc.index, bound, nullptr)) continue;
        beaten = true;
        if (j) {
          Justification win;
          win.clause = attacker_is_O ? "2.3.2" : "2.3.3";
          win.rule = rule(s.rule).label;
          win.notes.push_back(rule(tocc.rule).label + " > " + rule(s.rule).label);
          resolutions.push_back(std::move(win));
        }
        break;
      }
      if (!beaten) return false;
    }
    if (j)
      for (auto& r : resolutions) j->children.push_back(std::move(r));
    return true;
  }

  bool eval_minus_O(int code, int bound, Justification* j) const {
    const Lit q = lit_from_code(code);
    const int ncode = comp_code(code);
    const Lit nq = complement_literal(q);
    if (fact(Item::Kind::Obl, q)) return false;
    // (2.1)
    if (fact(Item::Kind::Obl, nq) || fact(Item::Kind::NotObl, q) || fact(Item::Kind::Perm, nq)) {
      if (j) { j->clause = "2.1"; j->notes.push_back("blocking fact present"); }
      return true;
    }
    // (2.2): every potential support is discarded
    {
      bool all_discarded = true;
      std::vector<Justification> subs;
      for (const Occ& o : occurrences(code)) {
        if (o.tag != SegTag::O) continue;
        Justification sub;
        if (!discarded_at(rule(o.rule), o.index, bound, j ? &sub : nullptr)) {
          all_discarded = false;
          break;
        }
        if (j) { sub.clause = "2.2"; sub.rule = rule(o.rule).label; subs.push_back(std::move(sub)); }
      }
      if (all_discarded) {
        if (j) {
          j->clause = "2.2";
          if (subs.empty()) j->notes.push_back("no obligation rule for the literal");
          for (auto& s : subs) j->children.push_back(std::move(s));
        }
        return true;
      }
    }
    // (2.3): an undefeated applicable attacker exists
    for (const Occ& s : occurrences(ncode)) {
      if (fact_neutralized(s.tag, nq)) continue;
      if (!applicable_at(rule(s.rule), s.index, bound, nullptr)) continue;
      const bool attacker_is_O = kind_O(s.rule);
      // the refutation stands only once every stronger counterattacker is
      // itself discarded (merely "not yet applicable" is not enough)
      bool all_resolved = true;
      for (const Occ& tocc : occurrences(code)) {
        if (!attacker_is_O && tocc.tag != SegTag::O) continue;
        if (fact_neutralized(tocc.tag, q)) continue;
        if (!beats(tocc.rule, s.rule)) continue;
        if (!discarded_at(rule(tocc.rule), tocc.index, bound, nullptr)) {
          all_resolved = false;
          break;
        }
      }
      if (all_resolved) {
        if (j) {
          j->clause = "2.3";
          j->rule = rule(s.rule).label;
          applicable_at(rule(s.rule), s.index, bound, j);
          j->notes.push_back("every stronger rule for " + lit_string(t_.symbols, q) +
                             " is discarded");
        }
        return true;
      }
    }
    return false;
  }

  bool eval_plus_P(int code, int bound, Justification* j) const {
    const Lit q = lit_from_code(code);
    const int ncode = comp_code(code);
    const Lit nq = complement_literal(q);
    if (fact(Item::Kind::Perm, q)) {
      if (j) {
        j->clause = "1";
        j->notes.push_back("fact P(" + lit_string(t_.symbols, q) + ")");
      }
      return true;
    }
    // (2.1)
    if (fact(Item::Kind::Obl, nq) || fact(Item::Kind::NotPerm, q)) return false;
    // (2.2)
    const Occ* support = nullptr;
    for (const Occ& o : occurrences(code)) {
      if (o.tag != SegTag::P) continue;
      if (applicable_at(rule(o.rule), o.index, bound, nullptr)) { support = &o; break; }
    }
    if (!support) return false;
    if (j) {
      j->clause = "2.2";
      j->rule = rule(support->rule).label;
      applicable_at(rule(support->rule), support->index, bound, j);
    }
    // (2.3): only obligation occurrences of ∼q attack a permission
    std::vector<Justification> resolutions;
    for (const Occ& s : occurrences(ncode)) {
      if (s.tag != SegTag::O) continue;
      if (fact_neutralized(s.tag, nq)) continue;
      Justification res;
      if (discarded_at(rule(s.rule), s.index, bound, j ? &res : nullptr)) {
        if (j) { res.clause = "2.3.1"; res.rule = rule(s.rule).label; resolutions.push_back(res); }
        continue;
      }
      bool beaten = false;
      for (const Occ& tocc : occurrences(code)) {
        if (fact_neutralized(tocc.tag, q)) continue;
        if (!beats(tocc.rule, s.rule)) continue;
        if (!applicable_at(rule(tocc.rule), tocc.index, bound, nullptr)) continue;
        beaten = true;
        if (j) {
          Justification win;
          win.clause = "2.3.2";
          win.rule = rule(s.rule).label;
          win.notes.push_back(rule(tocc.rule).label + " > " + rule(s.rule).label);
          resolutions.push_back(std::move(win));
        }
        break;
      }
      if (!beaten) return false;
    }
    if (j)
      for (auto& r : resolutions) j->children.push_back(std::move(r));
    return true;
  }

  bool eval_minus_P(int code, int bound, Justification* j) const {
    const Lit q = lit_from_code(code);
    const int ncode = comp_code(code);
    const Lit nq = complement_literal(q);
    if (fact(Item::Kind::Perm, q)) return false;
    // (2.1)
    if (fact(Item::Kind::Obl, nq) || fact(Item::Kind::NotPerm, q)) {
      if (j) { j->clause = "2.1"; j->notes.push_back("blocking fact present"); }
      return true;
    }
    // (2.2)
    {
      bool all_discarded = true;
      std::vector<Justification> subs;
      for (const Occ& o : occurrences(code)) {
        if (o.tag != SegTag::P) continue;
        Justification sub;
        if (!discarded_at(rule(o.rule), o.index, bound, j ? &sub : nullptr)) {
          all_discarded = false;
          break;
        }
        if (j) { sub.clause = "2.2"; sub.rule = rule(o.rule).label; subs.push_back(std::move(sub)); }
      }
      if (all_discarded) {
        if (j) {
          j->clause = "2.2";
          if (subs.empty()) j->notes.push_back("no permission support for the literal");
          for (auto& s : subs) j->children.push_back(std::move(s));
        }
        return true;
      }
    }
    // (2.3)
    for (const Occ& s : occurrences(ncode)) {
      if (s.tag != SegTag::O) continue;
      if (fact_neutralized(s.tag, nq)) continue;
      if (!applicable_at(rule(s.rule), s.index, bound, nullptr)) continue;
      bool all_resolved = true;
      for (const Occ& tocc : occurrences(code)) {
        if (fact_neutralized(tocc.tag, q)) continue;
        if (!beats(tocc.rule, s.rule)) continue;
        if (!discarded_at(rule(tocc.rule), tocc.index, bound, nullptr)) {
          all_resolved = false;
          break;
        }
      }
      if (all_resolved) {
        if (j) {
          j->clause = "2.3";
          j->rule = rule(s.rule).label;
          applicable_at(rule(s.rule), s.index, bound, j);
          j->notes.push_back("no applicable stronger rule for " + lit_string(t_.symbols, q));
        }
        return true;
      }
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// Free-function surface
// ---------------------------------------------------------------------------

inline Extension oracle_extension(const Theory& t, EngineConfig cfg = {}) {
  Oracle o(t, cfg);
  o.run();
  return o.extension();
}

/// Applicability at an ⊗-segment index against an explicit state.
inline bool applicable_O(const Theory& t, const Rule& r, Lit q, int j, const ProofState& s,
                         EngineConfig cfg = {}) {
  Oracle o(t, cfg);
  o.seed(s);
  return o.applicable(r, q, j);
}

/// Applicability at an ⊙-segment index against an explicit state.
inline bool applicable_P(const Theory& t, const Rule& r, Lit q, int j, const ProofState& s,
                         EngineConfig cfg = {}) {
  Oracle o(t, cfg);
  o.seed(s);
  return o.applicable(r, q, j);
}

inline bool discarded(const Theory& t, const Rule& r, Lit q, int j, const ProofState& s,
                      EngineConfig cfg = {}) {
  Oracle o(t, cfg);
  o.seed(s);
  return o.discarded(r, q, j);
}

}  // namespace ddl

#endif  // DDL_ORACLE_HPP
