#pragma once

// The adversary martingale and the finitely checkable martingale notions:
// fairness, T-valuedness, and success.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ivr/bits.hpp"
#include "ivr/capital.hpp"
#include "ivr/oracle.hpp"
#include "ivr/strategy.hpp"

namespace ivr {

// ---------------------------------------------------------------------------
// Adversary martingale M: one quantum on the next bit of A, starting at 1.

/// M's capital after seeing `seen` at position `pos` with capital `capital`.
inline Capital adversary_step(const Capital& capital, Bit seen, Bit a_bit) {
  if (capital.is_zero()) return Capital{};
  return seen == a_bit ? capital + 1 : capital - 1;
}

inline Capital adversary_capital(const OracleSequence& a, const BitString& sigma) {
  Capital m = 1;
  for (std::size_t i = 0; i < sigma.size(); ++i) m = adversary_step(m, sigma[i], a.bit(i));
  return m;
}

namespace detail {

/// Wagers one quantum on the next bit of the oracle whenever it can.
class OracleFollowerNode final : public StrategyNode {
 public:
  OracleFollowerNode(OracleSequence a, Capital capital, std::uint64_t depth)
      : a_(std::move(a)), capital_(std::move(capital)), depth_(depth) {}
  EvalResult value() const override { return capital_; }
  NodeRef child(Bit b) const override {
    return std::make_shared<OracleFollowerNode>(a_, adversary_step(capital_, b, a_.bit(depth_)), depth_ + 1);
  }

 private:
  OracleSequence a_;
  Capital capital_;
  std::uint64_t depth_;
};

}  // namespace detail

/// M rendered as an ordinary (total) strategy.
inline OpponentStrategy adversary_strategy(const OracleSequence& a) {
  return OpponentStrategy("adversary", std::make_shared<detail::OracleFollowerNode>(a, Capital{1}, 0));
}

// ---------------------------------------------------------------------------
// Fairness

enum class ViolationKind {
  fairness,           // 2*value(sigma) != value(sigma0) + value(sigma1)
  mixed_convergence,  // exactly one child converges
  not_downward_closed // a child converges below a divergent node
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::fairness: return "fairness";
    case ViolationKind::mixed_convergence: return "mixed_convergence";
    case ViolationKind::not_downward_closed: return "not_downward_closed";
  }
  return "?";
}

struct Violation {
  BitString at;
  ViolationKind kind;
  std::string detail;
};

struct ValidationReport {
  std::size_t depth = 0;
  std::size_t nodes_checked = 0;
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::size_t count(ViolationKind k) const {
    return static_cast<std::size_t>(
        std::count_if(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; }));
  }
};

namespace detail {

template <typename Visit>
void for_each_node(const NodeRef& root, std::size_t depth, Visit&& visit) {
  // every string of length < depth, together with its two children
  struct Frame {
    NodeRef node;
    BitString at;
  };
  std::vector<Frame> stack{{root, BitString{}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.at.size() >= depth) continue;
    NodeRef c0 = f.node->child(Bit::zero);
    NodeRef c1 = f.node->child(Bit::one);
    visit(f.at, *f.node, *c0, *c1);
    stack.push_back({c1, f.at.extended(Bit::one)});
    stack.push_back({c0, f.at.extended(Bit::zero)});
  }
}

}  // namespace detail

/// Checks every string of length < depth. Values are Capital by type, so
/// integrality and non-negativity hold structurally.
inline ValidationReport validate_fairness(const OpponentStrategy& strategy, std::size_t depth) {
  ValidationReport report;
  report.depth = depth;
  detail::for_each_node(strategy.root(), depth,
                        [&](const BitString& at, const StrategyNode& p, const StrategyNode& c0,
                            const StrategyNode& c1) {
                          ++report.nodes_checked;
                          EvalResult v = p.value(), v0 = c0.value(), v1 = c1.value();
                          if (v0.converges() != v1.converges()) {
                            report.violations.push_back(
                                {at, ViolationKind::mixed_convergence,
                                 "children " + std::string(v0.converges() ? "converge/diverge" : "diverge/converge")});
                          }
                          if (!v.converges() && (v0.converges() || v1.converges())) {
                            report.violations.push_back(
                                {at, ViolationKind::not_downward_closed, "divergent node has a convergent child"});
                          }
                          if (v.converges() && v0.converges() && v1.converges() &&
                              v.value() * 2 != v0.value() + v1.value()) {
                            report.violations.push_back({at, ViolationKind::fairness,
                                                         v.value().to_string() + " != (" + v0.value().to_string() +
                                                             " + " + v1.value().to_string() + ")/2"});
                          }
                        });
  return report;
}

// ---------------------------------------------------------------------------
// T-valuedness, observed to a finite depth

enum class Valuedness { integer_valued, finite_valued, single_valued };

inline const char* to_string(Valuedness v) {
  switch (v) {
    case Valuedness::integer_valued: return "IntegerValued";
    case Valuedness::finite_valued: return "FiniteValued";
    case Valuedness::single_valued: return "SingleValued";
  }
  return "?";
}

/// Strongest class consistent with the wagers seen on strings of length
/// < depth. `wagers` is the smallest T the observations are T-valued for;
/// it is empty when the strategy never wagered.
struct ValuednessClass {
  Valuedness kind = Valuedness::integer_valued;
  std::set<Capital> wagers;
  std::size_t depth = 0;
};

inline ValuednessClass classify_valuedness(const OpponentStrategy& strategy, std::size_t depth) {
  if (!validate_fairness(strategy, depth).ok()) {
    throw std::invalid_argument("classify_valuedness: '" + strategy.name() + "' fails fairness to depth " +
                                std::to_string(depth));
  }
  struct Observed {
    Capital capital;
    Capital wager;
  };
  std::vector<Observed> seen;
  detail::for_each_node(strategy.root(), depth,
                        [&](const BitString&, const StrategyNode& p, const StrategyNode& c0, const StrategyNode&) {
                          EvalResult v = p.value(), v0 = c0.value();
                          if (v.converges() && v0.converges()) seen.push_back({v.value(), abs_diff(v.value(), v0.value())});
                        });

  ValuednessClass out;
  out.depth = depth;
  for (const auto& o : seen)
    if (!o.wager.is_zero()) out.wagers.insert(o.wager);
  if (out.wagers.empty()) return out;

  // A zero wager is only excused when capital is below the smallest bet.
  const Capital& smallest = *out.wagers.begin();
  bool idle_while_solvent = std::any_of(seen.begin(), seen.end(), [&](const Observed& o) {
    return o.wager.is_zero() && o.capital >= smallest;
  });
  if (idle_while_solvent) out.wagers.insert(Capital{});
  out.kind = out.wagers.size() == 1 ? Valuedness::single_valued : Valuedness::finite_valued;
  return out;
}

// ---------------------------------------------------------------------------
// Success, as a finite proxy

struct SuccessReport {
  Capital sup_observed;
  bool threshold_reached = false;
};

inline SuccessReport success_sup(std::span<const Capital> capitals, const Capital& threshold) {
  if (capitals.empty()) throw std::invalid_argument("success_sup: empty capital sequence");
  SuccessReport r{*std::max_element(capitals.begin(), capitals.end()), false};
  r.threshold_reached = r.sup_observed >= threshold;
  return r;
}

}  // namespace ivr
