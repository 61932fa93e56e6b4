#pragma once

// The diagonalization engine. B is built one bit per stage against a finite
// family of opponents; the adversary M follows the oracle A and its capital
// is partitioned into a reserve of 1 and one gambler per opponent index.
//
// Convergence queries that the original argument answers with the halting
// set are answered here by the strategies themselves: declared-partial
// strategies report divergence exactly, fuel-bounded ones report fuel
// exhaustion as divergence.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ivr/bits.hpp"
#include "ivr/capital.hpp"
#include "ivr/ext_ratio.hpp"
#include "ivr/martingale.hpp"
#include "ivr/oracle.hpp"
#include "ivr/strategy.hpp"

namespace ivr {

enum class InactiveReason { fairness_violation, mixed_convergence, parent_divergence };

inline const char* to_string(InactiveReason r) {
  switch (r) {
    case InactiveReason::fairness_violation: return "FairnessViolation";
    case InactiveReason::mixed_convergence: return "MixedConvergence";
    case InactiveReason::parent_divergence: return "ParentDivergence";
  }
  return "?";
}

/// Active, or Inactive since `at_stage`. Once inactive, always inactive.
struct ActivityStatus {
  bool active = true;
  InactiveReason reason = InactiveReason::parent_divergence;
  std::size_t at_stage = 0;

  static ActivityStatus make_active() { return {}; }
  static ActivityStatus make_inactive(InactiveReason r, std::size_t stage) { return {false, r, stage}; }

  friend bool operator==(const ActivityStatus&, const ActivityStatus&) = default;
};

enum class AttentionReason { clause1, clause2a, clause2b, clause2c };

inline const char* to_string(AttentionReason r) {
  switch (r) {
    case AttentionReason::clause1: return "clause1";
    case AttentionReason::clause2a: return "clause2a";
    case AttentionReason::clause2b: return "clause2b";
    case AttentionReason::clause2c: return "clause2c";
  }
  return "?";
}

inline std::ostream& operator<<(std::ostream& os, AttentionReason r) { return os << to_string(r); }

/// Value of one opponent along B, and whether it was active when it was
/// last examined.
struct OpponentCell {
  EvalResult value = EvalResult::diverges();
  bool active = true;

  friend bool operator==(const OpponentCell&, const OpponentCell&) = default;
};

/// Gambler capitals. Indices past the family are never active; they are
/// only ever funded once, so they are kept as a count and a total.
struct GamblerValues {
  std::vector<Capital> opponents;
  Capital beyond_total;
  std::size_t beyond_count = 0;

  Capital total() const {
    Capital t = beyond_total;
    for (const auto& g : opponents) t += g;
    return t;
  }

  friend bool operator==(const GamblerValues&, const GamblerValues&) = default;
};

struct StageRecord {
  std::size_t stage = 0;  // 1-based; the stage decides the bit at position stage-1
  std::size_t acting_e = 0;
  AttentionReason reason = AttentionReason::clause1;
  Bit chosen_bit = Bit::zero;
  bool matches_A = false;
  Capital adversary_capital;
  GamblerValues gambler_values;
  std::vector<OpponentCell> opponent_values;  // along B after the stage
};

struct OpponentInfo {
  std::string name;
  StrategyFlavor flavor;
};

struct Trace {
  OracleSequence oracle;
  std::vector<OpponentInfo> opponents;
  GamblerValues initial_gamblers;
  std::vector<OpponentCell> initial_opponents;  // values at the empty string
  std::vector<StageRecord> rows;

  std::size_t family_size() const noexcept { return opponents.size(); }

  const GamblerValues& gamblers_before(std::size_t row) const {
    return row == 0 ? initial_gamblers : rows[row - 1].gambler_values;
  }
  const std::vector<OpponentCell>& opponents_before(std::size_t row) const {
    return row == 0 ? initial_opponents : rows[row - 1].opponent_values;
  }

  BitString b_prefix() const {
    BitString b;
    for (const auto& r : rows) b.push_back(r.chosen_bit);
    return b;
  }
};

/// Decision rule when the acting opponent bets: true selects A's bit.
/// Compares (G+1)/phi(B+A(s)) against (G-1)/phi(B+~A(s)); only a strict
/// win for the A side chooses A, so ties go the way that decreases both.
inline bool choose_bit_clause2c(const Capital& gambler, const Capital& phi_child_a, const Capital& phi_child_not_a) {
  if (gambler.is_zero()) throw std::invalid_argument("choose_bit_clause2c: gambler capital must be >= 1");
  return ext_ratio_cmp(ExtRatio(gambler + 1, phi_child_a), ExtRatio(gambler - 1, phi_child_not_a)) > 0;
}

class Construction {
 public:
  Construction(OracleSequence a, std::vector<OpponentStrategy> family)
      : oracle_(std::move(a)), family_(std::move(family)) {
    tracked_.reserve(family_.size());
    for (const auto& f : family_) {
      Tracked t{f.root(), f.root()->value(), {}, {EvalResult::diverges(), EvalResult::diverges()},
                ActivityStatus::make_active(), 0};
      expose_children(t);
      tracked_.push_back(std::move(t));
    }
  }

  const OracleSequence& oracle() const noexcept { return oracle_; }
  const std::vector<OpponentStrategy>& family() const noexcept { return family_; }
  std::size_t family_size() const noexcept { return family_.size(); }

  /// Completed stages, equal to |B|.
  std::size_t stage() const noexcept { return b_.size(); }
  const BitString& b_prefix() const noexcept { return b_; }
  const Capital& adversary_capital() const noexcept { return m_; }
  const Capital& reserve() const noexcept { return reserve_; }

  const Capital& gambler(std::size_t e) const {
    static const Capital zero;
    auto it = gamblers_.find(e);
    return it == gamblers_.end() ? zero : it->second;
  }

  /// Activity for the stage about to run. Only the newest node of B and its
  /// children need checking; earlier nodes were checked at earlier stages.
  ActivityStatus update_activity(std::size_t e) {
    const std::size_t now = stage() + 1;
    if (e >= family_.size()) return ActivityStatus::make_inactive(InactiveReason::parent_divergence, 0);
    Tracked& t = tracked_[e];
    if (!t.status.active || t.checked_stage == now) return t.status;
    t.checked_stage = now;
    const auto& [c0, c1] = t.child_values;
    if (!t.value.converges()) {
      t.status = ActivityStatus::make_inactive(InactiveReason::parent_divergence, now);
    } else if (c0.converges() != c1.converges()) {
      t.status = ActivityStatus::make_inactive(InactiveReason::mixed_convergence, now);
    } else if (c0.converges() && t.value.value() * 2 != c0.value() + c1.value()) {
      t.status = ActivityStatus::make_inactive(InactiveReason::fairness_violation, now);
    }
    return t.status;
  }

  std::optional<AttentionReason> requires_attention(std::size_t e) {
    const Capital& g = gambler(e);
    if (g.is_zero()) return AttentionReason::clause1;
    if (!update_activity(e).active) return std::nullopt;
    const Tracked& t = tracked_[e];
    const auto& [c0, c1] = t.child_values;
    if (!c0.converges() && !c1.converges()) return AttentionReason::clause2a;
    if (!c0.converges() || !c1.converges()) return std::nullopt;
    const Capital& v = t.value.value();
    if (c0.value() == v && c1.value() == v) {
      return v > g ? std::optional(AttentionReason::clause2b) : std::nullopt;
    }
    if (c0.value() != v && c1.value() != v) return AttentionReason::clause2c;
    return std::nullopt;
  }

  /// Opponent e's value at B+bit, as seen by the stage about to run.
  const EvalResult& child_value(std::size_t e, Bit bit) const { return tracked_.at(e).child_values[to_int(bit)]; }
  const EvalResult& current_value(std::size_t e) const { return tracked_.at(e).value; }

  StageRecord run_stage() {
    const std::size_t pos = stage();
    for (std::size_t e = 0; e < family_.size(); ++e) update_activity(e);

    std::size_t acting = 0;
    std::optional<AttentionReason> reason;
    for (std::size_t e = 0; e < family_.size() && !reason; ++e) {
      reason = requires_attention(e);
      acting = e;
    }
    if (!reason) {
      acting = next_unfunded_beyond_;
      reason = AttentionReason::clause1;
    }

    const Bit a_bit = oracle_.bit(pos);
    Bit chosen = a_bit;
    Capital& g = gamblers_[acting];
    if (*reason == AttentionReason::clause2c) {
      const bool toward_a = choose_bit_clause2c(g, child_value(acting, a_bit).value(),
                                                 child_value(acting, complement(a_bit)).value());
      chosen = toward_a ? a_bit : complement(a_bit);
      if (toward_a) {
        g += 1;
      } else {
        g -= 1;
      }
    } else {
      g += 1;
    }
    if (acting >= family_.size()) {
      beyond_total_ += 1;
      ++beyond_count_;
      while (!gambler(next_unfunded_beyond_).is_zero()) ++next_unfunded_beyond_;
    }

    m_ = adversary_step(m_, chosen, a_bit);
    b_.push_back(chosen);
    for (auto& t : tracked_) {
      t.node = t.children[to_int(chosen)];
      t.value = t.child_values[to_int(chosen)];
      expose_children(t);
    }

    StageRecord rec;
    rec.stage = pos + 1;
    rec.acting_e = acting;
    rec.reason = *reason;
    rec.chosen_bit = chosen;
    rec.matches_A = chosen == a_bit;
    rec.adversary_capital = m_;
    rec.gambler_values = gambler_values();
    rec.opponent_values = opponent_values();
    return rec;
  }

  GamblerValues gambler_values() const {
    GamblerValues out;
    out.opponents.reserve(family_.size());
    for (std::size_t e = 0; e < family_.size(); ++e) out.opponents.push_back(gambler(e));
    out.beyond_total = beyond_total_;
    out.beyond_count = beyond_count_;
    return out;
  }

  std::vector<OpponentCell> opponent_values() const {
    std::vector<OpponentCell> out;
    out.reserve(tracked_.size());
    for (const auto& t : tracked_) out.push_back({t.value, t.status.active});
    return out;
  }

  ActivityStatus activity(std::size_t e) const {
    if (e >= family_.size()) return ActivityStatus::make_inactive(InactiveReason::parent_divergence, 0);
    return tracked_[e].status;
  }

 private:
  struct Tracked {
    NodeRef node;
    EvalResult value;
    std::array<NodeRef, 2> children;
    std::array<EvalResult, 2> child_values;
    ActivityStatus status;
    std::size_t checked_stage;
  };

  static void expose_children(Tracked& t) {
    for (Bit b : {Bit::zero, Bit::one}) {
      t.children[to_int(b)] = t.node->child(b);
      t.child_values[to_int(b)] = t.children[to_int(b)]->value();
    }
  }

  OracleSequence oracle_;
  std::vector<OpponentStrategy> family_;
  std::vector<Tracked> tracked_;
  BitString b_;
  std::map<std::size_t, Capital> gamblers_;  // absent means 0
  Capital reserve_ = 1;
  Capital m_ = 1;
  Capital beyond_total_;
  std::size_t beyond_count_ = 0;
  std::size_t next_unfunded_beyond_ = family_.size();
};

struct BuildResult {
  Trace trace;
  Construction state;
};

/// Runs `num_stages` stages from the empty string with every gambler at 0.
inline BuildResult build_b(const OracleSequence& a, std::vector<OpponentStrategy> family, std::size_t num_stages) {
  Construction c(a, std::move(family));
  Trace trace{a, {}, c.gambler_values(), c.opponent_values(), {}};
  for (const auto& f : c.family()) trace.opponents.push_back({f.name(), f.flavor()});
  trace.rows.reserve(num_stages);
  for (std::size_t i = 0; i < num_stages; ++i) trace.rows.push_back(c.run_stage());
  return {std::move(trace), std::move(c)};
}

}  // namespace ivr
