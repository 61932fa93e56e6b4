#pragma once

// Partial integer-valued betting strategies as trees of immutable nodes.
//
// A node stands for one string sigma; value() answers whether the strategy
// converges there and child(b) moves to sigma+b in O(1). Walking a node tree
// is how the construction follows B without re-folding every prefix.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>

#include "ivr/bits.hpp"
#include "ivr/capital.hpp"

namespace ivr {

/// Converges(Capital) or Diverges.
class EvalResult {
 public:
  EvalResult(Capital v) : v_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  static EvalResult diverges() { return EvalResult(); }

  bool converges() const noexcept { return v_.has_value(); }
  const Capital& value() const {
    if (!v_) throw std::logic_error("EvalResult::value on a divergent result");
    return *v_;
  }

  friend bool operator==(const EvalResult&, const EvalResult&) = default;
  friend std::ostream& operator<<(std::ostream& os, const EvalResult& r) {
    return r.converges() ? os << r.value() : os << "div";
  }

 private:
  EvalResult() = default;
  std::optional<Capital> v_;
};

class StrategyNode;
using NodeRef = std::shared_ptr<const StrategyNode>;

class StrategyNode {
 public:
  virtual ~StrategyNode() = default;
  virtual EvalResult value() const = 0;
  virtual NodeRef child(Bit b) const = 0;
};

/// Convergence queries are answered exactly.
struct DeclaredPartial {
  friend bool operator==(const DeclaredPartial&, const DeclaredPartial&) = default;
};

/// Evaluation spends one step per bit read; strings longer than the budget
/// are reported as divergent.
struct FuelBounded {
  std::uint64_t fuel = 0;
  friend bool operator==(const FuelBounded&, const FuelBounded&) = default;
};

using StrategyFlavor = std::variant<DeclaredPartial, FuelBounded>;

inline std::string flavor_name(const StrategyFlavor& f) {
  if (const auto* fb = std::get_if<FuelBounded>(&f)) return "fuel_bounded(" + std::to_string(fb->fuel) + ")";
  return "declared_partial";
}

namespace detail {

class DivergentNode final : public StrategyNode, public std::enable_shared_from_this<DivergentNode> {
 public:
  EvalResult value() const override { return EvalResult::diverges(); }
  NodeRef child(Bit) const override { return shared_from_this(); }
};

class FuelNode final : public StrategyNode {
 public:
  FuelNode(NodeRef inner, std::uint64_t depth, std::uint64_t fuel)
      : inner_(std::move(inner)), depth_(depth), fuel_(fuel) {}
  EvalResult value() const override { return depth_ > fuel_ ? EvalResult::diverges() : inner_->value(); }
  NodeRef child(Bit b) const override {
    if (depth_ >= fuel_) return divergent();
    return std::make_shared<FuelNode>(inner_->child(b), depth_ + 1, fuel_);
  }
  static NodeRef divergent() {
    static const NodeRef node = std::make_shared<DivergentNode>();
    return node;
  }

 private:
  NodeRef inner_;
  std::uint64_t depth_;
  std::uint64_t fuel_;
};

/// Node for strategies given as a plain function of the whole string.
class FunctionNode final : public StrategyNode {
 public:
  using Fn = std::function<EvalResult(const BitString&)>;
  FunctionNode(std::shared_ptr<const Fn> fn, BitString at) : fn_(std::move(fn)), at_(std::move(at)) {}
  EvalResult value() const override { return (*fn_)(at_); }
  NodeRef child(Bit b) const override { return std::make_shared<FunctionNode>(fn_, at_.extended(b)); }

 private:
  std::shared_ptr<const Fn> fn_;
  BitString at_;
};

}  // namespace detail

inline NodeRef divergent_node() { return detail::FuelNode::divergent(); }

/// A named, deterministic partial map from strings to capital.
class OpponentStrategy {
 public:
  OpponentStrategy(std::string name, NodeRef root, StrategyFlavor flavor = DeclaredPartial{})
      : name_(std::move(name)), flavor_(flavor) {
    if (const auto* fb = std::get_if<FuelBounded>(&flavor_)) {
      root_ = std::make_shared<detail::FuelNode>(std::move(root), 0, fb->fuel);
    } else {
      root_ = std::move(root);
    }
  }

  const std::string& name() const noexcept { return name_; }
  const StrategyFlavor& flavor() const noexcept { return flavor_; }
  const NodeRef& root() const noexcept { return root_; }

  NodeRef node_at(const BitString& sigma) const {
    NodeRef n = root_;
    for (std::size_t i = 0; i < sigma.size(); ++i) n = n->child(sigma[i]);
    return n;
  }

  EvalResult evaluate(const BitString& sigma) const { return node_at(sigma)->value(); }

 private:
  std::string name_;
  StrategyFlavor flavor_;
  NodeRef root_;
};

/// Wraps an arbitrary function of the string. Nothing about fairness or
/// downward closure is enforced.
inline OpponentStrategy function_strategy(std::string name, detail::FunctionNode::Fn fn,
                                          StrategyFlavor flavor = DeclaredPartial{}) {
  auto shared = std::make_shared<const detail::FunctionNode::Fn>(std::move(fn));
  return OpponentStrategy(std::move(name), std::make_shared<detail::FunctionNode>(shared, BitString{}), flavor);
}

}  // namespace ivr
