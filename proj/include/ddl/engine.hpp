// ============================================================================
// ddl/engine.hpp — Linear-time extension computation
// ============================================================================
//
// Computes the defeasible extension by fact consumption followed by a
// worklist fixpoint over the modal Herbrand base, mutating a working copy of
// the theory:
//
//   - check_facts consumes F: clears satisfied antecedent items, deletes
//     rules with refuted items, and performs the per-fact head surgery.
//   - The main loop, per Herbrand entry □l: discards l for □ when no rule
//     can support it; when an empty-antecedent rule heads l in the right
//     segment and no live superior attacker for ∼l exists, the attackers are
//     inferiorly defeated, ∼l is discarded, and — once every attacker is
//     defeated — +∂□ l is established and its consequences are folded back
//     into the working theory (antecedent clearing plus chain truncation and
//     removal on the heads mentioning l / ∼l).
//
// Every index touch that removes or adds information bumps an instrumented
// mutation counter; the benchmark asserts this counter grows linearly in the
// theory size (number of literal occurrences plus number of rules).
//
// KEY DESIGN DECISIONS
//   - Occurrence indices (antecedent items, head literals, superiority pairs)
//     are exact and every mutation is O(1) amortized; deleted rules are
//     tombstoned, never compacted.
//   - Each head element carries its segment tag (⊗ / ⊙ / neither) fixed at
//     construction; truncation and removal never re-tag surviving elements,
//     which is what makes the O→P kind flip of removal implicit.
//   - Discarding □l is implemented as a full settle: tag the negative
//     conclusion, drop □l from HB, clear now-satisfied ¬□l antecedent items
//     and delete rules holding the refuted □l item.  (The bare HB removal
//     alone would strand antecedent occurrences when □l entered as a fact.)
//   - After fact consumption, rules still holding a plain antecedent literal
//     that is not a fact are deleted: such rules can never fire and must not
//     block discards.
//   - The guard protecting a permission derivation only considers obligation
//     attackers, mirroring the proof condition for +∂P.
//   - A queue-drain / full-rescan alternation guarantees the fixpoint even
//     if a scheduling trigger were missed; the rescan is mutation-free on
//     the final pass.
//
// ============================================================================

#ifndef DDL_ENGINE_HPP
#define DDL_ENGINE_HPP

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ddl/model.hpp"
#include "ddl/queries.hpp"

namespace ddl {

class WorkingTheory {
public:
  explicit WorkingTheory(const Theory& t, EngineConfig cfg = {}) : src_(t), cfg_(cfg) {
    const int natoms = static_cast<int>(t.symbols.size());
    ncodes_ = 2 * natoms;
    cnt_all_.assign(static_cast<std::size_t>(ncodes_), 0);
    cnt_o_.assign(static_cast<std::size_t>(ncodes_), 0);
    cnt_p_.assign(static_cast<std::size_t>(ncodes_), 0);
    live_infd_all_.assign(static_cast<std::size_t>(ncodes_), 0);
    live_infd_o_.assign(static_cast<std::size_t>(ncodes_), 0);
    hb_o_.assign(static_cast<std::size_t>(ncodes_), 0);
    hb_p_.assign(static_cast<std::size_t>(ncodes_), 0);
    for (int s = 0; s < 4; ++s) concl_[s].assign(static_cast<std::size_t>(ncodes_), 0);
    in_queue_.assign(static_cast<std::size_t>(2 * ncodes_), 0);

    for (AtomId a : used_atoms(t)) {
      hb_o_[static_cast<std::size_t>(2 * a)] = hb_o_[static_cast<std::size_t>(2 * a + 1)] = 1;
      hb_p_[static_cast<std::size_t>(2 * a)] = hb_p_[static_cast<std::size_t>(2 * a + 1)] = 1;
      hb_codes_.push_back(2 * a);
      hb_codes_.push_back(2 * a + 1);
    }

    rules_.reserve(t.rules.size());
    for (int ri = 0; ri < static_cast<int>(t.rules.size()); ++ri) {
      const Rule& r = t.rules[static_cast<std::size_t>(ri)];
      WRule w;
      w.kind = r.kind;
      for (const Item& a : r.antecedent) {
        ant_index_[item_code(a)].push_back({ri, static_cast<int>(w.ants.size())});
        w.ants.push_back({a, true});
      }
      w.ant_live = static_cast<int>(w.ants.size());
      for (int j = 1; j <= r.head.length(); ++j) {
        Lit q = r.head.elements[static_cast<std::size_t>(j - 1)];
        SegTag tag = head_tag(r.kind, j, r.head.otimes_len, cfg_.defeater_mode);
        const int code = lit_code(q);
        head_occ_[code].push_back({ri, j - 1});
        w.head.push_back({q, tag, true, j <= r.head.otimes_len});
        w.head_pos.emplace(code, j - 1);
        ++cnt_all_[static_cast<std::size_t>(code)];
        if (tag == SegTag::O) ++cnt_o_[static_cast<std::size_t>(code)];
        if (tag == SegTag::P) ++cnt_p_[static_cast<std::size_t>(code)];
      }
      w.head_live = static_cast<int>(w.head.size());
      rules_.push_back(std::move(w));
    }
    for (const auto& [wl, ll] : t.sup.pairs) {
      const Rule* w = t.find_rule(wl);
      const Rule* l = t.find_rule(ll);
      if (!w || !l) continue;
      int wi = static_cast<int>(w - t.rules.data());
      int li = static_cast<int>(l - t.rules.data());
      int pid = static_cast<int>(sup_.size());
      sup_.push_back({wi, li, true});
      by_winner_[wi].push_back(pid);
      by_loser_[li].push_back(pid);
    }
    for (int ri = 0; ri < static_cast<int>(rules_.size()); ++ri)
      if (rules_[static_cast<std::size_t>(ri)].ant_live == 0) on_ant_empty(ri);
  }

  std::uint64_t mutation_count() const { return mutations_; }

  // --------------------------------------------------------------------
  // Fact consumption
  // --------------------------------------------------------------------

  void check_facts() {
    for (const Item& f : src_.facts) {
      clear_ant_item(item_code(f));
      const Lit m = f.lit;
      const int code = lit_code(m);
      switch (f.kind) {
        case Item::Kind::Plain:
          // a fulfilled obligation closes its reparation chain
          for_head_occ(code, SegTag::O, [&](int ri, int pos) { truncate_after(ri, pos); });
          break;
        case Item::Kind::Obl:
          modify_obl(m);
          break;
        case Item::Kind::NotObl:
          discard(m, Modality::Obligation);
          for_head_occ(code, SegTag::O, [&](int ri, int pos) {
            truncate_after(ri, pos);
            remove_head_elem(ri, pos);
          });
          break;
        case Item::Kind::Perm:
          modify_perm(m);
          break;
        case Item::Kind::NotPerm:
          discard(m, Modality::Permission);
          for_head_occ(code, SegTag::P, [&](int ri, int pos) { remove_head_elem(ri, pos); });
          break;
      }
    }
  }

  /// Deletes every rule still holding a plain antecedent literal that is not
  /// a fact: no derivation can ever satisfy it, and keeping the rule would
  /// wrongly block discards of the literals it heads.
  void sweep_unsatisfiable_antecedents() {
    for (int ri = 0; ri < static_cast<int>(rules_.size()); ++ri) {
      WRule& w = rules_[static_cast<std::size_t>(ri)];
      if (!w.alive) continue;
      for (const WAnt& a : w.ants) {
        if (a.alive && a.item.kind == Item::Kind::Plain && !src_.has_fact(a.item)) {
          kill_rule(ri);
          break;
        }
      }
    }
  }

  // --------------------------------------------------------------------
  // Discard / ModifyObl / ModifyPerm
  // --------------------------------------------------------------------

  /// Settles −∂□ l: tags it, drops □l from HB, clears the ¬□l antecedent
  /// items it satisfies and deletes the rules holding the refuted □l item.
  void discard(Lit l, Modality m) {
    const int code = lit_code(l);
    auto& hb = m == Modality::Obligation ? hb_o_ : hb_p_;
    if (!hb[static_cast<std::size_t>(code)]) return;
    hb[static_cast<std::size_t>(code)] = 0;
    bump();
    concl_[m == Modality::Obligation ? kMinusO : kMinusP][static_cast<std::size_t>(code)] = 1;
    bump();
    if (m == Modality::Obligation) {
      clear_ant_item(item_code(Item::not_obl(l)));
      kill_rules_with_ant(item_code(Item::obl(l)));
      if (cfg_.weak_perm_antecedent)
        clear_ant_item(item_code(Item::perm(complement_literal(l))));
      // everything after a refuted ⊗-segment occurrence is discarded; the
      // occurrence itself stays (it still attacks the complement)
      for_head_occ(code, SegTag::O, [&](int ri, int pos) { truncate_after(ri, pos); });
    } else {
      clear_ant_item(item_code(Item::not_perm(l)));
      if (!cfg_.weak_perm_antecedent ||
          concl_[kPlusO][static_cast<std::size_t>(comp_code(code))])
        kill_rules_with_ant(item_code(Item::perm(l)));
      // under the weak-permission reading a P l item is only refuted once
      // +∂O ∼l also holds; modify_obl(∼l) finishes the job in that case
      activate_after(code);
    }
  }

  /// Folds +∂O l back into the working theory.
  void modify_obl(Lit l) {
    const int code = lit_code(l);
    if (!hb_o_[static_cast<std::size_t>(code)]) return;
    hb_o_[static_cast<std::size_t>(code)] = 0;
    bump();
    concl_[kPlusO][static_cast<std::size_t>(code)] = 1;
    bump();
    const Lit nl = complement_literal(l);
    const int ncode = comp_code(code);
    clear_ant_item(item_code(Item::obl(l)));
    kill_rules_with_ant(item_code(Item::not_obl(l)));
    if (cfg_.weak_perm_antecedent && concl_[kMinusP][static_cast<std::size_t>(ncode)])
      kill_rules_with_ant(item_code(Item::perm(nl)));
    discard(nl, Modality::Obligation);
    discard(nl, Modality::Permission);
    // head surgery: the obligation is settled, the opposite can no longer
    // be repaired past its occurrence
    const bool fulfilled =
        src_.has_fact(Item::plain(l)) && !src_.has_fact(Item::plain(nl));
    for_head_occ(code, SegTag::O, [&](int ri, int pos) {
      // a settled and already-fulfilled obligation closes the chain too
      if (fulfilled) truncate_after(ri, pos);
      remove_head_elem(ri, pos);
    });
    for_head_occ(ncode, SegTag::P, [&](int ri, int pos) { remove_head_elem(ri, pos); });
    for_head_occ(ncode, SegTag::O, [&](int ri, int pos) {
      truncate_after(ri, pos);
      remove_head_elem(ri, pos);
    });
  }

  /// Folds +∂P l back into the working theory.
  void modify_perm(Lit l) {
    const int code = lit_code(l);
    if (!hb_p_[static_cast<std::size_t>(code)]) return;
    hb_p_[static_cast<std::size_t>(code)] = 0;
    bump();
    concl_[kPlusP][static_cast<std::size_t>(code)] = 1;
    bump();
    const Lit nl = complement_literal(l);
    const int ncode = comp_code(code);
    clear_ant_item(item_code(Item::perm(l)));
    kill_rules_with_ant(item_code(Item::not_perm(l)));
    discard(nl, Modality::Obligation);
    for_head_occ(ncode, SegTag::O, [&](int ri, int pos) {
      truncate_after(ri, pos);
      remove_head_elem(ri, pos);
    });
    // a settled permission discards every later ⊙-segment element,
    // whichever selector the active mode assigns the segment to
    {
      auto it = head_occ_.find(code);
      if (it != head_occ_.end())
        for (const auto& [ri, pos] : it->second) {
          const WRule& w = rules_[static_cast<std::size_t>(ri)];
          if (!w.alive || !w.head[static_cast<std::size_t>(pos)].alive) continue;
          if (w.head[static_cast<std::size_t>(pos)].in_otimes ||
              w.kind == RuleKind::Defeater)
            continue;
          truncate_after(ri, pos);
        }
    }
  }

  // --------------------------------------------------------------------
  // Main loop
  // --------------------------------------------------------------------

  void run() {
    check_facts();
    sweep_unsatisfiable_antecedents();
    for (int code : hb_codes_) {
      schedule(code, Modality::Obligation);
      schedule(code, Modality::Permission);
    }
    while (true) {
      while (!queue_.empty()) {
        int entry = queue_.front();
        queue_.pop_front();
        in_queue_[static_cast<std::size_t>(entry)] = 0;
        process_entry(entry / 2, entry % 2 ? Modality::Permission : Modality::Obligation);
      }
      // safety rescan: normally mutation-free, terminates the fixpoint
      const std::uint64_t before = mutations_;
      for (int code : hb_codes_) {
        process_entry(code, Modality::Obligation);
        process_entry(code, Modality::Permission);
      }
      if (mutations_ == before && queue_.empty()) break;
    }
  }

  Extension extension() const {
    Extension e;
    for (int code : hb_codes_) {
      const Lit l = lit_from_code(code);
      const auto c = static_cast<std::size_t>(code);
      if (concl_[kPlusO][c]) e.plus_dO.insert(l);
      if (concl_[kMinusO][c]) e.minus_dO.insert(l);
      if (concl_[kPlusP][c]) e.plus_dP.insert(l);
      if (concl_[kMinusP][c]) e.minus_dP.insert(l);
      if (!concl_[kPlusO][c] && !concl_[kMinusO][c]) e.undetermined_O.insert(l);
      if (!concl_[kPlusP][c] && !concl_[kMinusP][c]) e.undetermined_P.insert(l);
    }
    return e;
  }

  /// Reconstructs the current (live) form of a rule, for inspection in
  /// tests.  nullopt if the rule was deleted.
  std::optional<Rule> live_rule(const std::string& label) const {
    for (int ri = 0; ri < static_cast<int>(rules_.size()); ++ri) {
      if (src_.rules[static_cast<std::size_t>(ri)].label != label) continue;
      const WRule& w = rules_[static_cast<std::size_t>(ri)];
      if (!w.alive) return std::nullopt;
      Rule out;
      out.label = label;
      for (const WAnt& a : w.ants)
        if (a.alive) out.antecedent.push_back(a.item);
      for (const WHead& h : w.head) {
        if (!h.alive) continue;
        out.head.elements.push_back(h.lit);
        if (h.tag == SegTag::O) ++out.head.otimes_len;
      }
      if (w.kind == RuleKind::Defeater) out.kind = RuleKind::Defeater;
      else out.kind = out.head.otimes_len > 0 ? RuleKind::ObligationRule : RuleKind::PermissionRule;
      return out;
    }
    return std::nullopt;
  }

private:
  // ---- storage -------------------------------------------------------

  struct WAnt {
    Item item;
    bool alive;
  };
  struct WHead {
    Lit lit;
    SegTag tag;
    bool alive;
    bool in_otimes;  // structural ⊗-segment membership, independent of tag
    bool enrolled = false;
  };
  struct WRule {
    bool alive = true;
    RuleKind kind = RuleKind::ObligationRule;
    std::vector<WAnt> ants;
    int ant_live = 0;
    std::vector<WHead> head;
    int head_live = 0;
    int first_live = 0;  // index into head of the first live element
    int frontier = 0;    // enrollment cursor: everything before is dead or a
                         // refuted ⊙ element, so walks resume here
    std::unordered_map<int, int> head_pos;  // lit code -> position
    std::vector<int> infd_for;              // lit codes whose infd set holds this rule
  };
  struct SupPair {
    int winner, loser;
    bool alive;
  };

  static constexpr int kPlusO = 0, kMinusO = 1, kPlusP = 2, kMinusP = 3;

  const Theory& src_;
  EngineConfig cfg_;
  int ncodes_ = 0;
  std::vector<WRule> rules_;
  std::vector<SupPair> sup_;
  std::unordered_map<int, std::vector<int>> by_winner_, by_loser_;
  std::unordered_map<std::int64_t, std::vector<std::pair<int, int>>> ant_index_;
  std::unordered_map<int, std::vector<std::pair<int, int>>> head_occ_;
  // (rule, head position) pairs whose occurrence is a live, antecedent-free
  // candidate at a reachable chain position, bucketed by literal and segment
  std::unordered_map<int, std::vector<std::pair<int, int>>> empty_first_o_, empty_first_p_,
      empty_first_n_;
  std::unordered_map<int, std::unordered_set<int>> infd_;
  std::vector<int> cnt_all_, cnt_o_, cnt_p_, live_infd_all_, live_infd_o_;
  std::vector<char> hb_o_, hb_p_;
  std::vector<char> concl_[4];
  std::vector<int> hb_codes_;
  std::deque<int> queue_;
  std::vector<char> in_queue_;
  std::uint64_t mutations_ = 0;

  void bump() { ++mutations_; }

  bool hb_alive(int code, Modality m) const {
    return (m == Modality::Obligation ? hb_o_ : hb_p_)[static_cast<std::size_t>(code)] != 0;
  }

  void schedule(int code, Modality m) {
    // settled entries still get processed: their supporter branches keep
    // attacking the complement as long as the rules are alive
    const int entry = code * 2 + (m == Modality::Permission ? 1 : 0);
    if (in_queue_[static_cast<std::size_t>(entry)]) return;
    in_queue_[static_cast<std::size_t>(entry)] = 1;
    queue_.push_back(entry);
  }

  void schedule_both_sides(int code) {
    schedule(code, Modality::Obligation);
    schedule(code, Modality::Permission);
    schedule(comp_code(code), Modality::Obligation);
    schedule(comp_code(code), Modality::Permission);
  }

  // ---- low-level mutations -------------------------------------------

  /// Drops the head occurrence counts/indices for head[pos] of rule ri.
  void drop_head_occ(int ri, int pos) {
    WRule& w = rules_[static_cast<std::size_t>(ri)];
    WHead& h = w.head[static_cast<std::size_t>(pos)];
    h.alive = false;
    --w.head_live;
    bump();
    const int code = lit_code(h.lit);
    --cnt_all_[static_cast<std::size_t>(code)];
    if (h.tag == SegTag::O) --cnt_o_[static_cast<std::size_t>(code)];
    if (h.tag == SegTag::P) --cnt_p_[static_cast<std::size_t>(code)];
    auto it = infd_.find(code);
    if (it != infd_.end() && it->second.count(ri)) {
      --live_infd_all_[static_cast<std::size_t>(code)];
      if (h.tag == SegTag::O) --live_infd_o_[static_cast<std::size_t>(code)];
    }
    schedule_both_sides(code);
  }

  void finish_kill(int ri) {
    WRule& w = rules_[static_cast<std::size_t>(ri)];
    w.alive = false;
    bump();
    for (auto* side : {&by_winner_, &by_loser_}) {
      auto it = side->find(ri);
      if (it == side->end()) continue;
      for (int pid : it->second) {
        SupPair& p = sup_[static_cast<std::size_t>(pid)];
        if (p.alive) {
          p.alive = false;
          bump();
          // the surviving endpoint's guards may unblock
          const WRule& other =
              rules_[static_cast<std::size_t>(p.winner == ri ? p.loser : p.winner)];
          if (other.alive && other.head_live > 0)
            schedule_both_sides(lit_code(other.head[static_cast<std::size_t>(other.first_live)].lit));
        }
      }
    }
  }

  void kill_rule(int ri) {
    WRule& w = rules_[static_cast<std::size_t>(ri)];
    if (!w.alive) return;
    for (int pos = w.first_live; pos < static_cast<int>(w.head.size()); ++pos)
      if (w.head[static_cast<std::size_t>(pos)].alive) drop_head_occ(ri, pos);
    finish_kill(ri);
  }

  /// Removes one live head element of a live rule; deletes the rule when the
  /// head empties.
  void remove_head_elem(int ri, int pos) {
    WRule& w = rules_[static_cast<std::size_t>(ri)];
    if (!w.alive || !w.head[static_cast<std::size_t>(pos)].alive) return;
    drop_head_occ(ri, pos);
    if (w.head_live == 0) {
      finish_kill(ri);
      return;
    }
    if (pos == w.first_live)
      while (!w.head[static_cast<std::size_t>(w.first_live)].alive) ++w.first_live;
    // dropping an element may unlock the positions it was gating
    enroll(ri);
  }

  /// Truncation keeping head[pos]: drops every live element after pos.
  void truncate_after(int ri, int pos) {
    WRule& w = rules_[static_cast<std::size_t>(ri)];
    if (!w.alive) return;
    for (int p = pos + 1; p < static_cast<int>(w.head.size()); ++p)
      if (w.head[static_cast<std::size_t>(p)].alive) drop_head_occ(ri, p);
  }

  void remove_ant(int ri, int pos) {
    WRule& w = rules_[static_cast<std::size_t>(ri)];
    WAnt& a = w.ants[static_cast<std::size_t>(pos)];
    if (!w.alive || !a.alive) return;
    a.alive = false;
    --w.ant_live;
    bump();
    if (w.ant_live == 0) on_ant_empty(ri);
  }

  /// Enrolls every reachable head position of an antecedent-free rule as a
  /// derivation/attack candidate.  A position is reachable while every
  /// earlier live element is a refuted ⊙-segment permission: a live
  /// ⊗-segment element gates the rest of the chain (it leaves only by
  /// surgery), and an unrefuted ⊙ element does too.  Enrollment is
  /// monotone: once a position is reachable it stays reachable, so each is
  /// enrolled and scheduled exactly once.
  void enroll(int ri) {
    WRule& w = rules_[static_cast<std::size_t>(ri)];
    if (!w.alive || w.ant_live != 0 || w.head_live == 0) return;
    int pos = w.frontier;
    for (; pos < static_cast<int>(w.head.size()); ++pos) {
      WHead& h = w.head[static_cast<std::size_t>(pos)];
      if (!h.alive) continue;
      const int code = lit_code(h.lit);
      if (!h.enrolled) {
        h.enrolled = true;
        auto& bucket = h.tag == SegTag::O   ? empty_first_o_
                       : h.tag == SegTag::P ? empty_first_p_
                                            : empty_first_n_;
        bucket[code].push_back({ri, pos});
        // both modal entries of the literal carry a supporter branch
        schedule(code, Modality::Obligation);
        schedule(code, Modality::Permission);
      }
      if (h.in_otimes) break;
      if (!concl_[kMinusP][static_cast<std::size_t>(code)]) break;
    }
    w.frontier = pos;
  }

  void on_ant_empty(int ri) { enroll(ri); }

  /// A refuted ⊙-segment occurrence activates the chain elements after it.
  void activate_after(int code) {
    auto it = head_occ_.find(code);
    if (it == head_occ_.end()) return;
    for (const auto& [ri, pos] : it->second) {
      const WRule& w = rules_[static_cast<std::size_t>(ri)];
      if (!w.alive || !w.head[static_cast<std::size_t>(pos)].alive) continue;
      if (w.head[static_cast<std::size_t>(pos)].in_otimes || w.kind == RuleKind::Defeater)
        continue;
      enroll(ri);
    }
  }

  void clear_ant_item(std::int64_t icode) {
    auto it = ant_index_.find(icode);
    if (it == ant_index_.end()) return;
    for (const auto& [ri, pos] : it->second) remove_ant(ri, pos);
    ant_index_.erase(it);
  }

  void kill_rules_with_ant(std::int64_t icode) {
    auto it = ant_index_.find(icode);
    if (it == ant_index_.end()) return;
    for (const auto& [ri, pos] : it->second) {
      const WRule& w = rules_[static_cast<std::size_t>(ri)];
      if (w.alive && w.ants[static_cast<std::size_t>(pos)].alive) kill_rule(ri);
    }
    ant_index_.erase(it);
  }

  /// Applies fn to every live head occurrence of `code` carrying `tag`.
  /// Dead entries are compacted away; live ones stay indexed (fn may keep
  /// them alive, e.g. truncation keeps its anchor element).
  template <class Fn>
  void for_head_occ(int code, SegTag tag, Fn fn) {
    auto it = head_occ_.find(code);
    if (it == head_occ_.end()) return;
    std::vector<std::pair<int, int>> live;
    live.reserve(it->second.size());
    for (const auto& [ri, pos] : it->second) {
      const WRule& w = rules_[static_cast<std::size_t>(ri)];
      if (w.alive && w.head[static_cast<std::size_t>(pos)].alive) live.push_back({ri, pos});
    }
    it->second = live;
    for (const auto& [ri, pos] : live)
      if (rules_[static_cast<std::size_t>(ri)].head[static_cast<std::size_t>(pos)].tag == tag)
        fn(ri, pos);
  }

  // ---- inferior defeat -----------------------------------------------

  bool rule_has_live_occ(int ri, int code, bool require_o_tag) const {
    const WRule& w = rules_[static_cast<std::size_t>(ri)];
    if (!w.alive) return false;
    auto it = w.head_pos.find(code);
    if (it == w.head_pos.end()) return false;
    const WHead& h = w.head[static_cast<std::size_t>(it->second)];
    return h.alive && (!require_o_tag || h.tag == SegTag::O);
  }

  void add_infd(int code, int ri) {
    if (!rule_has_live_occ(ri, code, false)) return;
    auto& set = infd_[code];
    if (!set.insert(ri).second) return;
    bump();
    rules_[static_cast<std::size_t>(ri)].infd_for.push_back(code);
    ++live_infd_all_[static_cast<std::size_t>(code)];
    const WRule& w = rules_[static_cast<std::size_t>(ri)];
    if (w.head[static_cast<std::size_t>(w.head_pos.at(code))].tag == SegTag::O)
      ++live_infd_o_[static_cast<std::size_t>(code)];
    schedule_both_sides(code);
  }

  // ---- branch processing ---------------------------------------------

  /// Candidates for the supporter branch of `seg` at `code`: enrolled
  /// positions whose rule and occurrence are still alive.  Dead entries are
  /// compacted away; enrollment guarantees the antecedent is empty and the
  /// position reachable.
  std::vector<int> valid_candidates(int code, SegTag seg) {
    auto& buckets = seg == SegTag::O   ? empty_first_o_
                    : seg == SegTag::P ? empty_first_p_
                                       : empty_first_n_;
    auto bit = buckets.find(code);
    if (bit == buckets.end()) return {};
    std::vector<std::pair<int, int>> keep;
    std::vector<int> valid;
    for (const auto& [ri, pos] : bit->second) {
      const WRule& w = rules_[static_cast<std::size_t>(ri)];
      if (!w.alive || !w.head[static_cast<std::size_t>(pos)].alive) continue;
      keep.push_back({ri, pos});
      valid.push_back(ri);
    }
    bit->second = keep;
    return valid;
  }

  bool rule_kind_O(int ri) const {
    return rules_[static_cast<std::size_t>(ri)].kind == RuleKind::ObligationRule;
  }

  /// Marks every attacker occurrence of `ncode` weaker than a candidate as
  /// inferiorly defeated, then returns whether some candidate has no live
  /// superior attacker.  Who may defeat whom follows the team-defeat
  /// clauses: an occurrence in an obligation-kind rule is beaten by any
  /// stronger occurrence, one in a permission rule or defeater only by a
  /// stronger ⊗-segment occurrence.  `cand_tag` is the shared segment of
  /// the candidates' supporting occurrence.
  bool attack(const std::vector<int>& valid, int ncode, SegTag cand_tag) {
    for (int ri : valid) {
      auto wit = by_winner_.find(ri);
      if (wit == by_winner_.end()) continue;
      for (int pid : wit->second) {
        const SupPair& p = sup_[static_cast<std::size_t>(pid)];
        if (!p.alive) continue;
        if (cand_tag != SegTag::O && !rule_kind_O(p.loser)) continue;
        if (rule_has_live_occ(p.loser, ncode, /*require_o_tag=*/false))
          add_infd(ncode, p.loser);
      }
    }
    for (int ri : valid) {
      // an obligation-kind candidate is blocked by any stronger opposing
      // occurrence, other candidates only by an ⊗-segment one
      const bool o_tag_only = !rule_kind_O(ri);
      bool blocked = false;
      auto lit_it = by_loser_.find(ri);
      if (lit_it != by_loser_.end()) {
        for (int pid : lit_it->second) {
          const SupPair& p = sup_[static_cast<std::size_t>(pid)];
          if (!p.alive) continue;
          if (rule_has_live_occ(p.winner, ncode, o_tag_only)) {
            blocked = true;
            break;
          }
        }
      }
      if (!blocked) return true;
    }
    return false;
  }

  void process_entry(int code, Modality m) {
    const auto& cnt = m == Modality::Obligation ? cnt_o_ : cnt_p_;
    if (hb_alive(code, m) && cnt[static_cast<std::size_t>(code)] == 0) {
      // no rule can support □l: refute it
      discard(lit_from_code(code), m);
    }

    const Lit l = lit_from_code(code);
    const int ncode = comp_code(code);
    const Lit nl = lit_from_code(ncode);

    // The supporter branches run even after □l itself was settled: an
    // applicable unbeaten rule attacks the complement by occurrence alone,
    // regardless of whether its own conclusion is still derivable.

    // ⊗-segment supporter: an unbeaten one refutes ∼l under the entry's
    // modality; the obligation of l stands once any supporter is applicable
    // and every opposing occurrence is defeated — the supporter itself may
    // be beaten as long as its team defeats each attacker
    {
      std::vector<int> valid = valid_candidates(code, SegTag::O);
      if (!valid.empty()) {
        if (attack(valid, ncode, SegTag::O)) discard(nl, m);
        const bool all_defeated = cnt_all_[static_cast<std::size_t>(ncode)] -
                                      live_infd_all_[static_cast<std::size_t>(ncode)] ==
                                  0;
        if (all_defeated && !src_.has_fact(Item::not_obl(l))) modify_obl(l);
      }
    }

    // permission supporter: an unbeaten one refutes the obligation of ∼l;
    // the permission of l stands once every opposing ⊗-segment occurrence
    // is defeated
    {
      std::vector<int> valid = valid_candidates(code, SegTag::P);
      if (!valid.empty()) {
        if (attack(valid, ncode, SegTag::P)) discard(nl, Modality::Obligation);
        const bool all_defeated = cnt_o_[static_cast<std::size_t>(ncode)] -
                                      live_infd_o_[static_cast<std::size_t>(ncode)] ==
                                  0;
        if (all_defeated) modify_perm(l);
      }
    }

    // untagged supporter (a defeater head, or a segment the active mode
    // keeps out of the selectors): blocks the opposing obligation without
    // ever supporting a conclusion of its own
    {
      std::vector<int> valid = valid_candidates(code, SegTag::None);
      if (!valid.empty() && attack(valid, ncode, SegTag::None))
        discard(nl, Modality::Obligation);
    }
  }
};

struct EngineResult {
  Extension extension;
  bool input_consistent = true;
  std::uint64_t mutation_count = 0;
};

inline EngineResult compute_extension(const Theory& t, EngineConfig cfg = {}) {
  EngineResult res;
  res.input_consistent = check_consistency(t).consistent;
  WorkingTheory w(t, cfg);
  w.run();
  res.extension = w.extension();
  res.mutation_count = w.mutation_count();
  return res;
}

}  // namespace ddl

#endif  // DDL_ENGINE_HPP
