#pragma once

// Bundled opponent catalog and the line-based strategy spec format:
//
//   # comment
//   <name> <kind> key=value ...
//
// The line order of a file is the opponent index, hence its priority.
//
// Kinds and keys (capital defaults to 1; any kind accepts fuel=<N>):
//   constant_bettor  k=<N> guess=<guesser> [capital=]
//   saver            c=<N>
//   partial_after    d=<N> [capital=]
//   escalator        k0=<N> [guess=<guesser>] [capital=]
//   copycat          [capital=]            (follows the run's oracle)
//   table            map=<key>:<N>,...  [default=<N>]   key 'e' is the empty string
//
// Guessers: alternating, all_zeros, all_ones, majority_of_history.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ivr/bits.hpp"
#include "ivr/capital.hpp"
#include "ivr/martingale.hpp"
#include "ivr/oracle.hpp"
#include "ivr/strategy.hpp"

namespace ivr {

enum class StrategyKind { constant_bettor, saver, partial_after, escalator, copycat, table };

inline const char* to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::constant_bettor: return "constant_bettor";
    case StrategyKind::saver: return "saver";
    case StrategyKind::partial_after: return "partial_after";
    case StrategyKind::escalator: return "escalator";
    case StrategyKind::copycat: return "copycat";
    case StrategyKind::table: return "table";
  }
  return "?";
}

inline std::optional<StrategyKind> parse_kind(std::string_view s) {
  for (auto k : {StrategyKind::constant_bettor, StrategyKind::saver, StrategyKind::partial_after,
                 StrategyKind::escalator, StrategyKind::copycat, StrategyKind::table}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

enum class Guesser { alternating, all_zeros, all_ones, majority_of_history };

inline std::optional<Guesser> parse_guesser(std::string_view s) {
  if (s == "alternating") return Guesser::alternating;
  if (s == "all_zeros") return Guesser::all_zeros;
  if (s == "all_ones") return Guesser::all_ones;
  if (s == "majority_of_history") return Guesser::majority_of_history;
  return std::nullopt;
}

struct StrategySpec {
  std::string name;
  StrategyKind kind = StrategyKind::saver;
  std::map<std::string, std::string> params;  // every key except the capital
  Capital initial_capital = 1;

  friend bool operator==(const StrategySpec&, const StrategySpec&) = default;
};

/// Raised for malformed specs; line() is 1-based, 0 when not from a file.
class SpecError : public std::runtime_error {
 public:
  SpecError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

// Key that carries the starting capital in the text format.
inline const char* capital_key(StrategyKind k) { return k == StrategyKind::saver ? "c" : "capital"; }

struct KindSchema {
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

inline KindSchema schema_for(StrategyKind k) {
  switch (k) {
    case StrategyKind::constant_bettor: return {{"k", "guess"}, {"fuel"}};
    case StrategyKind::saver: return {{}, {"fuel"}};
    case StrategyKind::partial_after: return {{"d"}, {"fuel"}};
    case StrategyKind::escalator: return {{"k0"}, {"guess", "fuel"}};
    case StrategyKind::copycat: return {{}, {"fuel"}};
    case StrategyKind::table: return {{"map"}, {"default", "fuel"}};
  }
  return {};
}

inline Capital parse_amount(std::size_t line, const std::string& key, const std::string& value) {
  if (!value.empty() && value.front() == '-') throw SpecError(line, "negative value for '" + key + "': " + value);
  try {
    return Capital::parse(value);
  } catch (const std::invalid_argument&) {
    throw SpecError(line, "'" + key + "' must be a non-negative integer, got '" + value + "'");
  }
}

inline std::uint64_t parse_count(std::size_t line, const std::string& key, const std::string& value) {
  Capital c = parse_amount(line, key, value);
  if (c > Capital(std::numeric_limits<std::uint64_t>::max())) throw SpecError(line, "'" + key + "' too large");
  return c.value().convert_to<std::uint64_t>();
}

using TableMap = std::unordered_map<BitString, Capital>;

inline TableMap parse_table_map(std::size_t line, const std::string& text) {
  TableMap out;
  std::stringstream ss(text);
  std::string entry;
  while (std::getline(ss, entry, ',')) {
    auto colon = entry.find(':');
    if (colon == std::string::npos) throw SpecError(line, "table entry needs key:value, got '" + entry + "'");
    std::string key = entry.substr(0, colon);
    BitString at;
    if (key != "e") {
      try {
        at = BitString::parse(key);
      } catch (const std::invalid_argument&) {
        throw SpecError(line, "table key must be a bit string or 'e', got '" + key + "'");
      }
      if (key.empty()) throw SpecError(line, "table key must be a bit string or 'e', got ''");
    }
    if (!out.emplace(at, parse_amount(line, "map", entry.substr(colon + 1))).second) {
      throw SpecError(line, "duplicate table key '" + key + "'");
    }
  }
  return out;
}

inline void validate_spec(const StrategySpec& spec, std::size_t line) {
  KindSchema schema = schema_for(spec.kind);
  for (const auto& key : schema.required) {
    if (!spec.params.count(key)) {
      throw SpecError(line, std::string(to_string(spec.kind)) + " '" + spec.name + "' is missing '" + key + "'");
    }
  }
  for (const auto& [key, value] : spec.params) {
    bool known = std::find(schema.required.begin(), schema.required.end(), key) != schema.required.end() ||
                 std::find(schema.optional.begin(), schema.optional.end(), key) != schema.optional.end();
    if (!known) throw SpecError(line, std::string(to_string(spec.kind)) + " does not take '" + key + "'");
    if (key == "guess") {
      if (!parse_guesser(value)) throw SpecError(line, "unknown guesser '" + value + "'");
    } else if (key == "map") {
      parse_table_map(line, value);
    } else if (key == "k" || key == "k0") {
      if (parse_amount(line, key, value).is_zero()) throw SpecError(line, "'" + key + "' must be positive");
    } else if (key == "d" || key == "fuel") {
      parse_count(line, key, value);
    } else {
      parse_amount(line, key, value);
    }
  }
}

// Constant value on strings of length <= limit, divergent beyond.
class ConstantNode final : public StrategyNode {
 public:
  ConstantNode(Capital value, std::uint64_t depth, std::optional<std::uint64_t> limit)
      : value_(std::move(value)), depth_(depth), limit_(limit) {}
  EvalResult value() const override { return value_; }
  NodeRef child(Bit) const override {
    if (limit_ && depth_ >= *limit_) return divergent_node();
    return std::make_shared<ConstantNode>(value_, depth_ + 1, limit_);
  }

 private:
  Capital value_;
  std::uint64_t depth_;
  std::optional<std::uint64_t> limit_;
};

struct BettorRule {
  Guesser guess = Guesser::alternating;
  Capital base;           // wager size, or the escalator's reset size
  bool escalate = false;  // double after a win, reset after a loss
};

inline Bit predict(Guesser g, std::uint64_t depth, std::uint64_t ones) {
  switch (g) {
    case Guesser::alternating: return depth % 2 == 0 ? Bit::zero : Bit::one;
    case Guesser::all_zeros: return Bit::zero;
    case Guesser::all_ones: return Bit::one;
    case Guesser::majority_of_history: return 2 * ones > depth ? Bit::one : Bit::zero;  // ties guess 0
  }
  return Bit::zero;
}

class BettorNode final : public StrategyNode {
 public:
  BettorNode(std::shared_ptr<const BettorRule> rule, Capital capital, Capital nominal, std::uint64_t depth,
             std::uint64_t ones)
      : rule_(std::move(rule)),
        capital_(std::move(capital)),
        nominal_(std::move(nominal)),
        depth_(depth),
        ones_(ones) {}

  EvalResult value() const override { return capital_; }

  NodeRef child(Bit b) const override {
    Capital w = wager();
    std::uint64_t ones = ones_ + (b == Bit::one ? 1 : 0);
    if (w.is_zero()) return std::make_shared<BettorNode>(rule_, capital_, nominal_, depth_ + 1, ones);
    bool won = predict(rule_->guess, depth_, ones_) == b;
    Capital next_nominal = rule_->escalate ? (won ? nominal_ * 2 : rule_->base) : nominal_;
    return std::make_shared<BettorNode>(rule_, won ? capital_ + w : capital_ - w, std::move(next_nominal),
                                        depth_ + 1, ones);
  }

 private:
  Capital wager() const {
    if (rule_->escalate) return std::min(nominal_, capital_);
    return capital_ >= rule_->base ? rule_->base : Capital{};
  }

  std::shared_ptr<const BettorRule> rule_;
  Capital capital_;
  Capital nominal_;
  std::uint64_t depth_;
  std::uint64_t ones_;
};

}  // namespace detail

/// Builds the strategy a spec describes. `run_oracle` is the sequence
/// copycat follows.
inline OpponentStrategy make_builtin(const StrategySpec& spec, const OracleSequence& run_oracle) {
  detail::validate_spec(spec, 0);
  const auto& p = spec.params;
  StrategyFlavor flavor = DeclaredPartial{};
  if (auto it = p.find("fuel"); it != p.end()) flavor = FuelBounded{detail::parse_count(0, "fuel", it->second)};

  NodeRef root;
  switch (spec.kind) {
    case StrategyKind::constant_bettor:
    case StrategyKind::escalator: {
      auto rule = std::make_shared<detail::BettorRule>();
      bool esc = spec.kind == StrategyKind::escalator;
      rule->escalate = esc;
      rule->base = Capital::parse(p.at(esc ? "k0" : "k"));
      if (auto it = p.find("guess"); it != p.end()) rule->guess = *parse_guesser(it->second);
      root = std::make_shared<detail::BettorNode>(rule, spec.initial_capital, rule->base, 0, 0);
      break;
    }
    case StrategyKind::saver:
      root = std::make_shared<detail::ConstantNode>(spec.initial_capital, 0, std::nullopt);
      break;
    case StrategyKind::partial_after:
      root = std::make_shared<detail::ConstantNode>(spec.initial_capital, 0, detail::parse_count(0, "d", p.at("d")));
      break;
    case StrategyKind::copycat:
      root = std::make_shared<detail::OracleFollowerNode>(run_oracle, spec.initial_capital, 0);
      break;
    case StrategyKind::table: {
      auto map = std::make_shared<const detail::TableMap>(detail::parse_table_map(0, p.at("map")));
      std::optional<Capital> fallback;
      if (auto it = p.find("default"); it != p.end()) fallback = Capital::parse(it->second);
      return function_strategy(
          spec.name,
          [map, fallback](const BitString& s) -> EvalResult {
            if (auto it = map->find(s); it != map->end()) return it->second;
            return fallback ? EvalResult(*fallback) : EvalResult::diverges();
          },
          flavor);
    }
  }
  return OpponentStrategy(spec.name, std::move(root), flavor);
}

inline std::vector<OpponentStrategy> make_family(const std::vector<StrategySpec>& specs,
                                                 const OracleSequence& run_oracle) {
  std::vector<OpponentStrategy> out;
  out.reserve(specs.size());
  for (const auto& s : specs) out.push_back(make_builtin(s, run_oracle));
  return out;
}

inline std::vector<StrategySpec> parse_strategy_spec(std::string_view text) {
  std::vector<StrategySpec> out;
  std::set<std::string> names;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    std::istringstream tokens{std::string(raw)};
    std::vector<std::string> words;
    for (std::string w; tokens >> w;) words.push_back(w);
    if (words.empty()) continue;
    if (words.size() < 2) throw SpecError(line_no, "expected '<name> <kind> key=value ...'");

    StrategySpec spec;
    spec.name = words[0];
    if (words[0].find('=') != std::string::npos) throw SpecError(line_no, "name may not contain '='");
    auto kind = parse_kind(words[1]);
    if (!kind) throw SpecError(line_no, "unknown kind '" + words[1] + "'");
    spec.kind = *kind;
    if (!names.insert(spec.name).second) throw SpecError(line_no, "duplicate name '" + spec.name + "'");

    for (std::size_t i = 2; i < words.size(); ++i) {
      auto eq = words[i].find('=');
      if (eq == std::string::npos || eq == 0) throw SpecError(line_no, "expected key=value, got '" + words[i] + "'");
      std::string key = words[i].substr(0, eq);
      std::string value = words[i].substr(eq + 1);
      if (key == detail::capital_key(spec.kind)) {
        if (spec.params.count(key) || value.empty()) throw SpecError(line_no, "bad or repeated '" + key + "'");
        spec.initial_capital = detail::parse_amount(line_no, key, value);
        spec.params[key];  // marks presence until the loop ends
        continue;
      }
      if (!spec.params.emplace(key, value).second) throw SpecError(line_no, "repeated key '" + key + "'");
    }
    bool has_capital = spec.params.erase(detail::capital_key(spec.kind)) > 0;
    if (spec.kind == StrategyKind::saver && !has_capital) throw SpecError(line_no, "saver '" + spec.name + "' is missing 'c'");
    detail::validate_spec(spec, line_no);
    out.push_back(std::move(spec));
  }
  return out;
}

inline std::string serialize_strategy_specs(const std::vector<StrategySpec>& specs) {
  std::ostringstream os;
  for (const auto& s : specs) {
    os << s.name << ' ' << to_string(s.kind);
    for (const auto& [k, v] : s.params) os << ' ' << k << '=' << v;
    os << ' ' << detail::capital_key(s.kind) << '=' << s.initial_capital << '\n';
  }
  return os.str();
}

/// The canonical family used by `--opponents builtin:default`.
inline const char* default_family_text() {
  return "alt   constant_bettor k=1 guess=alternating capital=8\n"
         "esc   escalator k0=1 capital=8\n"
         "save  saver c=5\n"
         "part  partial_after d=3 capital=4\n"
         "maj   constant_bettor k=2 guess=majority_of_history capital=8\n";
}

inline std::vector<StrategySpec> default_family_specs() { return parse_strategy_spec(default_family_text()); }

}  // namespace ivr
