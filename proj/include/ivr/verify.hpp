#pragma once

// Independent checks over construction traces, and the exhaustive check of
// the ratio rule against the integer threshold predicate n*G < phi.
//
// Nothing here calls into Construction. Trace checks recompute what they
// need from the oracle, the recorded bits and the strategies themselves.

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ivr/bits.hpp"
#include "ivr/capital.hpp"
#include "ivr/construction.hpp"
#include "ivr/ext_ratio.hpp"
#include "ivr/martingale.hpp"
#include "ivr/strategy.hpp"

namespace ivr {

struct CheckResult {
  bool ok = true;
  std::size_t checked = 0;  // rows or cases examined
  std::string detail;       // first failure, if any

  explicit operator bool() const noexcept { return ok; }

  void fail(const std::string& what) {
    if (ok) detail = what;
    ok = false;
  }
};

// ---------------------------------------------------------------------------
// Sublemma: when the opponent bets n on A's bit, A's bit is chosen exactly
// when n*G < phi.

inline bool sublemma_oracle(const Capital& gambler, const Capital& phi, const Capital& n) {
  if (gambler.is_zero() || n.is_zero() || n > phi) {
    throw std::invalid_argument("sublemma_oracle: need G >= 1 and 1 <= n <= phi");
  }
  return n * gambler < phi;
}

struct SublemmaCounterexample {
  Capital gambler, phi, n;
  bool decision = false;
  bool oracle = false;
};

struct SublemmaSweepReport {
  std::size_t cases = 0;
  std::vector<SublemmaCounterexample> counterexamples;
  bool ok() const noexcept { return counterexamples.empty(); }
};

using Clause2cRule = std::function<bool(const Capital&, const Capital&, const Capital&)>;

/// All 1 <= G <= bound_g, 1 <= n <= phi <= bound_phi, n <= bound_n, with the
/// opponent betting n on A's bit: children phi+n (A side) and phi-n.
inline SublemmaSweepReport check_sublemma_equivalence(std::size_t bound_g, std::size_t bound_phi, std::size_t bound_n,
                                                      const Clause2cRule& rule = choose_bit_clause2c) {
  if (bound_g == 0 || bound_phi == 0 || bound_n == 0) {
    throw std::invalid_argument("check_sublemma_equivalence: bounds must be >= 1");
  }
  SublemmaSweepReport report;
  for (std::size_t g = 1; g <= bound_g; ++g) {
    for (std::size_t phi = 1; phi <= bound_phi; ++phi) {
      for (std::size_t n = 1; n <= std::min(phi, bound_n); ++n) {
        ++report.cases;
        bool decision = rule(g, phi + n, phi - n);
        bool oracle = sublemma_oracle(g, phi, n);
        if (decision != oracle) report.counterexamples.push_back({g, phi, n, decision, oracle});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Conservation: M = 1 + sum of gamblers, M >= 1, with M recomputed from the
// oracle and the recorded bits.

inline CheckResult check_conservation(const Trace& trace) {
  CheckResult r;
  Capital m = 1;
  if (trace.initial_gamblers.total() + 1 != m) r.fail("initial gambler total is not 0");
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const StageRecord& row = trace.rows[i];
    const Bit a_bit = trace.oracle.bit(i);
    m = adversary_step(m, row.chosen_bit, a_bit);
    ++r.checked;
    std::ostringstream where;
    where << "stage " << row.stage << ": ";
    if (row.matches_A != (row.chosen_bit == a_bit)) r.fail(where.str() + "matches_A disagrees with the oracle");
    if (row.adversary_capital != m) r.fail(where.str() + "recorded M " + row.adversary_capital.to_string() +
                                           " != recomputed " + m.to_string());
    if (m != row.gambler_values.total() + 1) {
      r.fail(where.str() + "M " + m.to_string() + " != 1 + " + row.gambler_values.total().to_string());
    }
    if (m < Capital(1)) r.fail(where.str() + "M < 1");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Quantum bookkeeping

/// Per-gambler counts of stages at which the gambler moved.
struct StageCounters {
  std::size_t both_up = 0;     // G and phi increased
  std::size_t both_down = 0;   // G and phi decreased
  std::size_t g_only_up = 0;   // G increased, phi did not
  std::size_t unclassified = 0;  // G decreased while phi did not

  std::size_t moves() const noexcept { return both_up + both_down + g_only_up + unclassified; }
};

struct BookkeepingReport {
  CheckResult result;
  std::vector<StageCounters> per_opponent;
  StageCounters beyond;  // gamblers past the family; only ever g_only_up

  explicit operator bool() const noexcept { return result.ok; }
};

/// (a) each row moves exactly one gambler, the acting one, by exactly one
/// quantum; (b) each G_e equals G_e(start) + both_up - both_down + g_only_up
/// at every row.
inline BookkeepingReport check_bookkeeping(const Trace& trace) {
  using integer = Capital::integer;
  const std::size_t n = trace.family_size();
  BookkeepingReport rep;
  rep.per_opponent.resize(n);
  CheckResult& r = rep.result;

  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const StageRecord& row = trace.rows[i];
    const GamblerValues& before = trace.gamblers_before(i);
    const GamblerValues& after = row.gambler_values;
    const auto& phi_before = trace.opponents_before(i);
    const auto& phi_after = row.opponent_values;
    std::ostringstream where;
    where << "stage " << row.stage << ": ";
    ++r.checked;
    if (before.opponents.size() != n || after.opponents.size() != n || phi_after.size() != n) {
      r.fail(where.str() + "row width does not match the family");
      continue;
    }

    std::size_t moved = 0;
    for (std::size_t e = 0; e < n; ++e) {
      if (before.opponents[e] == after.opponents[e]) continue;
      ++moved;
      integer delta = after.opponents[e].value() - before.opponents[e].value();
      if (delta != 1 && delta != -1) r.fail(where.str() + "G_" + std::to_string(e) + " moved by " + delta.str());
      if (row.acting_e != e) r.fail(where.str() + "G_" + std::to_string(e) + " moved but e=" +
                                    std::to_string(row.acting_e) + " acted");
      const auto& pb = phi_before[e].value;
      const auto& pa = phi_after[e].value;
      bool phi_up = pb.converges() && pa.converges() && pa.value() > pb.value();
      bool phi_down = pb.converges() && pa.converges() && pa.value() < pb.value();
      StageCounters& c = rep.per_opponent[e];
      if (delta > 0) {
        ++(phi_up ? c.both_up : c.g_only_up);
      } else if (phi_down) {
        ++c.both_down;
      } else {
        ++c.unclassified;
      }
    }
    if (before.beyond_total != after.beyond_total || before.beyond_count != after.beyond_count) {
      ++moved;
      if (after.beyond_total != before.beyond_total + 1 || after.beyond_count != before.beyond_count + 1) {
        r.fail(where.str() + "gamblers past the family did not gain exactly one quantum");
      }
      if (row.acting_e < n) r.fail(where.str() + "a gambler past the family moved but e=" +
                                   std::to_string(row.acting_e) + " acted");
      ++rep.beyond.g_only_up;
    }
    if (moved != 1) r.fail(where.str() + std::to_string(moved) + " gamblers moved");

    for (std::size_t e = 0; e < n; ++e) {
      const StageCounters& c = rep.per_opponent[e];
      integer rebuilt = trace.initial_gamblers.opponents.at(e).value() + integer(c.both_up) -
                        integer(c.both_down) + integer(c.g_only_up);
      if (rebuilt != after.opponents[e].value()) {
        r.fail(where.str() + "counter identity fails for G_" + std::to_string(e) + ": rebuilt " + rebuilt.str() +
               " vs " + after.opponents[e].to_string());
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Per-row properties of the rows where the acting opponent was betting

namespace detail {

struct BetRow {
  std::size_t stage;
  Capital g_before, g_after, phi_before, phi_after;
  bool matches_a;
};

template <typename Fn>
void for_each_clause2c_row(const Trace& trace, CheckResult& r, Fn&& fn) {
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const StageRecord& row = trace.rows[i];
    if (row.reason != AttentionReason::clause2c) continue;
    const std::size_t e = row.acting_e;
    ++r.checked;
    if (e >= trace.family_size()) {
      r.fail("stage " + std::to_string(row.stage) + ": clause2c for an index past the family");
      continue;
    }
    const auto& pb = trace.opponents_before(i)[e].value;
    const auto& pa = row.opponent_values[e].value;
    if (!pb.converges() || !pa.converges()) {
      r.fail("stage " + std::to_string(row.stage) + ": clause2c with a divergent opponent value");
      continue;
    }
    fn(BetRow{row.stage, trace.gamblers_before(i).opponents[e], row.gambler_values.opponents[e], pb.value(),
              pa.value(), row.matches_A});
  }
}

}  // namespace detail

/// G_e/phi_e after >= before on every clause2c row (extended comparison).
inline CheckResult check_ratio_monotonicity(const Trace& trace) {
  CheckResult r;
  detail::for_each_clause2c_row(trace, r, [&](const detail::BetRow& b) {
    ExtRatio before(b.g_before, b.phi_before), after(b.g_after, b.phi_after);
    if (ext_ratio_cmp(after, before) < 0) {
      std::ostringstream os;
      os << "stage " << b.stage << ": ratio fell from " << before << " to " << after;
      r.fail(os.str());
    }
  });
  return r;
}

/// Where the opponent bet n on A's bit, the recorded choice equals
/// sublemma_oracle(G, phi, n). The bet is read off the trace: the opponent
/// is fair at the node, so its move along B determines the bet.
inline CheckResult check_sublemma_agreement(const Trace& trace) {
  CheckResult r;
  CheckResult rows;
  detail::for_each_clause2c_row(trace, rows, [&](const detail::BetRow& b) {
    Capital n = abs_diff(b.phi_after, b.phi_before);
    bool bet_on_a = b.matches_a ? b.phi_after > b.phi_before : b.phi_after < b.phi_before;
    if (!bet_on_a) return;
    ++r.checked;
    if (b.matches_a != sublemma_oracle(b.g_before, b.phi_before, n)) {
      r.fail("stage " + std::to_string(b.stage) + ": choice disagrees with n*G < phi for G=" +
             b.g_before.to_string() + " phi=" + b.phi_before.to_string() + " n=" + n.to_string());
    }
  });
  if (!rows.ok) r.fail(rows.detail);
  return r;
}

/// Once G_e >= phi_e at the start of a clause2c row, that row lowers phi_e.
inline CheckResult check_dominance_decrease(const Trace& trace) {
  CheckResult r;
  detail::for_each_clause2c_row(trace, r, [&](const detail::BetRow& b) {
    if (b.g_before >= b.phi_before && !(b.phi_after < b.phi_before)) {
      r.fail("stage " + std::to_string(b.stage) + ": G >= phi but phi did not decrease");
    }
  });
  return r;
}

/// No Inactive -> Active transition.
inline CheckResult check_activity_monotone(const Trace& trace) {
  CheckResult r;
  const std::size_t n = trace.family_size();
  std::vector<bool> seen_inactive(n, false);
  for (const auto& row : trace.rows) {
    ++r.checked;
    for (std::size_t e = 0; e < n && e < row.opponent_values.size(); ++e) {
      if (row.opponent_values[e].active && seen_inactive[e]) {
        r.fail("stage " + std::to_string(row.stage) + ": opponent " + std::to_string(e) + " reactivated");
      }
      if (!row.opponent_values[e].active) seen_inactive[e] = true;
    }
  }
  return r;
}

/// Replays the attention scan from the strategies and the recorded bits:
/// each row's acting index is the least one requiring attention, for the
/// recorded reason, and non-betting rows take A's bit.
inline CheckResult check_priority(const Trace& trace, const std::vector<OpponentStrategy>& family) {
  CheckResult r;
  const std::size_t n = family.size();
  if (n != trace.family_size()) {
    r.fail("family size does not match the trace");
    return r;
  }
  std::vector<NodeRef> nodes;
  std::vector<bool> active(n, true);
  for (const auto& f : family) nodes.push_back(f.root());

  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const StageRecord& row = trace.rows[i];
    const GamblerValues& g = trace.gamblers_before(i);
    ++r.checked;

    std::vector<std::array<EvalResult, 3>> vals;  // value, child 0, child 1
    for (std::size_t e = 0; e < n; ++e) {
      vals.push_back({nodes[e]->value(), nodes[e]->child(Bit::zero)->value(), nodes[e]->child(Bit::one)->value()});
      const auto& [v, c0, c1] = vals.back();
      bool looks_fair = v.converges() && c0.converges() == c1.converges() &&
                        (!c0.converges() || v.value() * 2 == c0.value() + c1.value());
      active[e] = active[e] && looks_fair;
    }

    std::optional<std::size_t> least;
    std::optional<AttentionReason> why;
    for (std::size_t e = 0; e < n && !least; ++e) {
      const auto& [v, c0, c1] = vals[e];
      if (g.opponents[e].is_zero()) {
        why = AttentionReason::clause1;
      } else if (active[e]) {
        if (!c0.converges() && !c1.converges()) {
          why = AttentionReason::clause2a;
        } else if (c0.converges() && c0.value() == v.value() && c1.value() == v.value()) {
          if (v.value() > g.opponents[e]) why = AttentionReason::clause2b;
        } else if (c0.converges() && c0.value() != v.value() && c1.value() != v.value()) {
          why = AttentionReason::clause2c;
        }
      }
      if (why) least = e;
    }
    if (!least) {
      least = n + g.beyond_count;
      why = AttentionReason::clause1;
    }

    const std::string where = "stage " + std::to_string(row.stage) + ": ";
    if (row.acting_e != *least) {
      r.fail(where + "e=" + std::to_string(row.acting_e) + " acted but least requiring attention is " +
             std::to_string(*least));
    } else if (row.reason != *why) {
      r.fail(where + "reason " + to_string(row.reason) + " recorded, replay says " + to_string(*why));
    }
    if (row.reason != AttentionReason::clause2c && !row.matches_A) r.fail(where + "non-betting action left A");

    for (std::size_t e = 0; e < n; ++e) nodes[e] = nodes[e]->child(row.chosen_bit);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Defeat analysis

enum class DefeatStatus { defeated, settled, undefeated };

inline const char* to_string(DefeatStatus s) {
  switch (s) {
    case DefeatStatus::defeated: return "Defeated";
    case DefeatStatus::settled: return "Settled";
    case DefeatStatus::undefeated: return "Undefeated";
  }
  return "?";
}

struct OpponentDefeat {
  std::string name;
  std::optional<std::size_t> last_bet_stage;
  std::size_t bets = 0;
  Capital sup_capital;
  EvalResult final_value = EvalResult::diverges();
  DefeatStatus status = DefeatStatus::settled;
};

struct DefeatReport {
  std::size_t window = 0;
  std::vector<OpponentDefeat> opponents;
};

/// Default trailing window: a tenth of the trace.
inline std::size_t default_undefeated_window(std::size_t rows) { return rows / 10; }

/// A bet is visible as a change of the opponent's value between consecutive
/// prefixes of B. Undefeated means a bet inside the last `window` stages;
/// otherwise Defeated when the final value is 0 after some bet, else Settled.
inline DefeatReport analyze_defeat(const Trace& trace, const std::vector<OpponentStrategy>& family,
                                   std::optional<std::size_t> window = std::nullopt) {
  if (family.size() != trace.family_size()) throw std::invalid_argument("analyze_defeat: family/trace size mismatch");
  for (std::size_t e = 0; e < family.size(); ++e) {
    if (family[e].name() != trace.opponents[e].name) {
      throw std::invalid_argument("analyze_defeat: opponent " + std::to_string(e) + " is '" + family[e].name() +
                                  "' but the trace has '" + trace.opponents[e].name + "'");
    }
  }
  DefeatReport rep;
  const std::size_t rows = trace.rows.size();
  rep.window = window.value_or(default_undefeated_window(rows));
  for (std::size_t e = 0; e < family.size(); ++e) {
    OpponentDefeat d;
    d.name = family[e].name();
    EvalResult prev = trace.initial_opponents[e].value;
    if (prev.converges()) d.sup_capital = prev.value();
    for (const auto& row : trace.rows) {
      const EvalResult& cur = row.opponent_values[e].value;
      if (cur.converges()) {
        d.sup_capital = std::max(d.sup_capital, cur.value());
        if (prev.converges() && prev.value() != cur.value()) {
          d.last_bet_stage = row.stage;
          ++d.bets;
        }
      }
      prev = cur;
    }
    d.final_value = prev;
    if (d.last_bet_stage && *d.last_bet_stage + rep.window > rows) {
      d.status = DefeatStatus::undefeated;
    } else if (d.last_bet_stage && d.final_value.converges() && d.final_value.value().is_zero()) {
      d.status = DefeatStatus::defeated;
    } else {
      d.status = DefeatStatus::settled;
    }
    rep.opponents.push_back(std::move(d));
  }
  return rep;
}

// ---------------------------------------------------------------------------

struct NamedCheck {
  std::string name;
  CheckResult result;
};

/// Every trace check, in a fixed order.
inline std::vector<NamedCheck> verify_trace(const Trace& trace, const std::vector<OpponentStrategy>& family) {
  return {
      {"conservation", check_conservation(trace)},
      {"bookkeeping", check_bookkeeping(trace).result},
      {"ratio_monotonicity", check_ratio_monotonicity(trace)},
      {"sublemma_agreement", check_sublemma_agreement(trace)},
      {"dominance_decrease", check_dominance_decrease(trace)},
      {"activity_monotone", check_activity_monotone(trace)},
      {"priority", check_priority(trace, family)},
  };
}

}  // namespace ivr
