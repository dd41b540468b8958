// ============================================================================
// ddl/bench.hpp — Scaling families and the linearity benchmark
// ============================================================================
//
// The engine's complexity argument is operationalized through its mutation
// counter: on structured scaling families the counter must grow linearly in
// the theory size S (number of literal occurrences plus number of rules).
// Wall time is recorded as a secondary, noisier signal.
//
// Families:
//   chain       — one rule carrying a single long reparation chain; every
//                 element is derived and folded away in turn.
//   antecedent  — a dependency chain r0: => O a0, ri: O(a_{i-1}) => O a_i.
//   supfan      — one strong rule defeating a wide fan of opposing rules.
//
// ============================================================================

#ifndef DDL_BENCH_HPP
#define DDL_BENCH_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddl/engine.hpp"

namespace ddl {

enum class BenchFamily { Chain, Antecedent, SupFan };

/// S per the size definition: literal occurrences (facts, antecedents,
/// heads) plus the number of rules.
inline std::size_t theory_size(const Theory& t) {
  std::size_t s = t.rules.size() + t.facts.size();
  for (const Rule& r : t.rules) s += r.antecedent.size() + r.head.elements.size();
  return s;
}

inline Theory build_family(BenchFamily family, std::size_t target_size) {
  Theory t;
  auto atom = [&](std::size_t i) { return t.symbols.intern("a" + std::to_string(i)); };
  switch (family) {
    case BenchFamily::Chain: {
      // S = n + 1
      const std::size_t n = target_size > 1 ? target_size - 1 : 1;
      Rule r;
      r.label = "r0";
      r.kind = RuleKind::ObligationRule;
      for (std::size_t i = 0; i < n; ++i) r.head.elements.push_back(Lit{atom(i), true});
      r.head.otimes_len = static_cast<int>(n);
      t.rules.push_back(std::move(r));
      break;
    }
    case BenchFamily::Antecedent: {
      // S = 3n + 2
      const std::size_t n = target_size > 5 ? (target_size - 2) / 3 : 1;
      Rule r0;
      r0.label = "r0";
      r0.kind = RuleKind::ObligationRule;
      r0.head.elements.push_back(Lit{atom(0), true});
      r0.head.otimes_len = 1;
      t.rules.push_back(std::move(r0));
      for (std::size_t i = 1; i <= n; ++i) {
        Rule r;
        r.label = "r" + std::to_string(i);
        r.kind = RuleKind::ObligationRule;
        r.antecedent.push_back(Item::obl(Lit{atom(i - 1), true}));
        r.head.elements.push_back(Lit{atom(i), true});
        r.head.otimes_len = 1;
        t.rules.push_back(std::move(r));
      }
      break;
    }
    case BenchFamily::SupFan: {
      // S = 2n + 2
      const std::size_t n = target_size > 3 ? (target_size - 2) / 2 : 1;
      const Lit l{atom(0), true};
      Rule top;
      top.label = "top";
      top.kind = RuleKind::ObligationRule;
      top.head.elements.push_back(l);
      top.head.otimes_len = 1;
      t.rules.push_back(std::move(top));
      for (std::size_t i = 0; i < n; ++i) {
        Rule s;
        s.label = "s" + std::to_string(i);
        s.kind = RuleKind::ObligationRule;
        s.head.elements.push_back(complement_literal(l));
        s.head.otimes_len = 1;
        t.rules.push_back(std::move(s));
        t.sup.pairs.insert({"top", s.label});
      }
      break;
    }
  }
  return t;
}

struct BenchReport {
  std::vector<std::size_t> sizes;
  std::vector<double> wall_times;               // seconds, median over reps
  std::vector<std::uint64_t> mutation_counts;
  double slope_time = 0.0;       // log-log least-squares slope
  double slope_mutations = 0.0;
};

namespace detail {

inline double loglog_slope(const std::vector<std::size_t>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log10(static_cast<double>(xs[i]));
    const double y = std::log10(std::max(ys[i], 1e-12));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double d = static_cast<double>(n) * sxx - sx * sx;
  return d == 0.0 ? 0.0 : (static_cast<double>(n) * sxy - sx * sy) / d;
}

}  // namespace detail

inline BenchReport run_bench(const std::vector<std::size_t>& sizes, int reps,
                             BenchFamily family = BenchFamily::Chain) {
  BenchReport rep;
  std::vector<double> mut_f;
  for (std::size_t s : sizes) {
    Theory t = build_family(family, s);
    std::vector<double> times;
    std::uint64_t mutations = 0;
    for (int i = 0; i < std::max(1, reps); ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      EngineResult res = compute_extension(t);
      const auto t1 = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double>(t1 - t0).count());
      mutations = res.mutation_count;
    }
    std::sort(times.begin(), times.end());
    rep.sizes.push_back(theory_size(t));
    rep.wall_times.push_back(times[times.size() / 2]);
    rep.mutation_counts.push_back(mutations);
    mut_f.push_back(static_cast<double>(mutations));
  }
  rep.slope_time = detail::loglog_slope(rep.sizes, rep.wall_times);
  rep.slope_mutations = detail::loglog_slope(rep.sizes, mut_f);
  return rep;
}

inline nlohmann::ordered_json bench_report_to_json(const BenchReport& r) {
  nlohmann::ordered_json j;
  j["sizes"] = r.sizes;
  j["wall_times"] = r.wall_times;
  j["mutation_counts"] = r.mutation_counts;
  j["slope_time"] = r.slope_time;
  j["slope_mutations"] = r.slope_mutations;
  return j;
}

}  // namespace ddl

#endif  // DDL_BENCH_HPP
