// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ivr/construction.hpp"
#include "ivr/ext_ratio.hpp"
#include "ivr/martingale.hpp"
#include "ivr/opponents.hpp"
#include "ivr/trace_csv.hpp"
#include "ivr/verify.hpp"

using namespace ivr;

namespace {

constexpr std::size_t kStages = 10000;

int failures = 0;

void report(int n, const std::string& what, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << " " << what << ": " << detail << '\n';
  if (!ok) ++failures;
}

// Names of the trace checks that reject `t`.
std::vector<std::string> failing_checks(const Trace& t, const std::vector<OpponentStrategy>& fam) {
  std::vector<std::string> out;
  for (const auto& [name, r] : verify_trace(t, fam))
    if (!r.ok) out.push_back(name);
  return out;
}

std::string join(const std::vector<std::string>& v) {
  if (v.empty()) return "none";
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(IVR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main() {
  // 1: sweep
  {
    auto t0 = std::chrono::steady_clock::now();
    SublemmaSweepReport rep = check_sublemma_equivalence(60, 60, 30);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream d;
    d << rep.cases << " cases, " << rep.counterexamples.size() << " counterexamples, " << secs << "s";
    report(1, "sublemma equivalence", rep.ok() && rep.cases == 81900 && secs < 5.0, d.str());
  }

  const OracleSequence a = parse_oracle("seed:42");
  const auto family = make_family(default_family_specs(), a);
  const BuildResult built = build_b(a, family, kStages);
  const Trace& trace = built.trace;

  // 2-4: invariants on the default run
  {
    CheckResult c = check_conservation(trace);
    report(2, "conservation", c.ok && c.checked == kStages,
           std::to_string(c.checked) + " rows" + (c.ok ? "" : "; " + c.detail));
    BookkeepingReport b = check_bookkeeping(trace);
    std::size_t unclassified = 0;
    for (const auto& pc : b.per_opponent) unclassified += pc.unclassified;
    report(3, "quantum bookkeeping", b.result.ok && unclassified == 0,
           std::to_string(b.result.checked) + " rows, " + std::to_string(b.beyond.g_only_up) +
               " grants past the family" + (b.result.ok ? "" : "; " + b.result.detail));
    CheckResult m = check_ratio_monotonicity(trace);
    report(4, "ratio monotonicity", m.ok && m.checked > 0,
           std::to_string(m.checked) + " betting rows" + (m.ok ? "" : "; " + m.detail));
  }

  // 5-6: defeat and success
  const DefeatReport defeat = analyze_defeat(trace, family);
  std::size_t settle = 0;
  {
    bool ok = true;
    std::ostringstream d;
    for (const auto& o : defeat.opponents) {
      std::size_t last = o.last_bet_stage.value_or(0);
      settle = std::max(settle, last);
      ok = ok && o.status != DefeatStatus::undefeated && last < 5000;
      d << o.name << "=" << to_string(o.status) << "@" << (o.last_bet_stage ? std::to_string(last) : "none")
        << " sup=" << o.sup_capital << "; ";
    }
    report(5, "opponent defeat", ok && defeat.opponents.size() == 5, d.str());
  }
  {
    const Capital final_m = built.state.adversary_capital();
    bool ok = final_m >= Capital(5000) && trace.rows.size() == kStages;
    // every stage after the last bet is a fresh grant to a new gambler
    for (std::size_t i = settle; i < trace.rows.size(); ++i) {
      const StageRecord& row = trace.rows[i];
      ok = ok && row.reason == AttentionReason::clause1 && row.matches_A && row.acting_e >= family.size() &&
           row.adversary_capital == trace.rows[settle - 1].adversary_capital + Capital(i + 1 - settle);
    }
    std::ostringstream d;
    d << "M(" << kStages << ")=" << final_m << ", settled at stage " << settle << ", M(" << settle
      << ")=" << trace.rows[settle - 1].adversary_capital;
    report(6, "adversary success", ok, d.str());
  }

  // 7: copycat can read A and is never caught
  {
    auto cc = make_family(parse_strategy_spec("cc copycat"), a);
    Trace t = build_b(a, cc, kStages).trace;
    DefeatReport r = analyze_defeat(t, cc);
    bool ok = r.opponents[0].status == DefeatStatus::undefeated;
    ExtRatio prev(t.initial_gamblers.opponents[0], t.initial_opponents[0].value.value());
    bool below_one = ext_ratio_cmp(prev, ExtRatio(1, 1)) < 0;
    bool increasing = true;
    for (const auto& row : t.rows) {
      const auto& phi = row.opponent_values[0].value;
      if (!phi.converges()) { increasing = false; break; }
      ExtRatio cur(row.gambler_values.opponents[0], phi.value());
      increasing = increasing && ext_ratio_cmp(cur, prev) > 0;
      below_one = below_one && ext_ratio_cmp(cur, ExtRatio(1, 1)) < 0;
      prev = cur;
    }
    std::ostringstream d;
    d << to_string(r.opponents[0].status) << ", final ratio " << prev;
    report(7, "copycat caveat", ok && increasing && below_one, d.str());
  }

  // 8: validator and mutation sensitivity
  {
    std::ostringstream d;
    bool ok = true;

    StrategySpec bad{"bad", StrategyKind::table, {{"map", "0000:7"}, {"default", "4"}}, 1};
    ValidationReport shallow = validate_fairness(make_builtin(bad, a), 3);
    ValidationReport deep = validate_fairness(make_builtin(bad, a), 4);
    bool fair_ok = shallow.ok() && deep.count(ViolationKind::fairness) == 1 &&
                   deep.violations[0].at == BitString::parse("000");
    d << "fairness flagged at depth 4: " << (fair_ok ? "yes" : "no") << "; ";
    ok = ok && fair_ok;

    Clause2cRule flipped = [](const Capital& g, const Capital& pa, const Capital& pna) {
      return ext_ratio_cmp(ExtRatio(g + 1, pa), ExtRatio(g - 1, pna)) >= 0;
    };
    SublemmaSweepReport fs = check_sublemma_equivalence(60, 60, 30, flipped);
    bool tie_ok = !fs.ok() && std::all_of(fs.counterexamples.begin(), fs.counterexamples.end(),
                                          [](const auto& c) { return c.n * c.gambler == c.phi; });
    d << "flipped tie: " << fs.counterexamples.size() << " counterexamples; ";
    ok = ok && tie_ok;

    const auto baseline = failing_checks(trace, family);
    ok = ok && baseline.empty();

    // a stray quantum on the gamblers past the family, present from the start
    Trace corrupt = trace;
    corrupt.initial_gamblers.beyond_total += 1;
    for (auto& row : corrupt.rows) row.gambler_values.beyond_total += 1;
    auto cf = failing_checks(corrupt, family);
    d << "corrupted G caught by " << join(cf) << "; ";
    ok = ok && cf == std::vector<std::string>{"conservation"};

    // the acting gambler takes 2, a bankrupt opponent's gambler pays 1: totals
    // still balance, and the donor (children 0, G >= 1) needs no attention either way
    Trace jump = trace;
    const std::size_t at = kStages / 2;
    std::size_t donor = family.size();
    for (std::size_t e = 0; e < family.size(); ++e) {
      const auto& phi = jump.rows[at].opponent_values[e].value;
      if (phi.converges() && phi.value().is_zero() && jump.rows[at].gambler_values.opponents[e] >= Capital(2)) donor = e;
    }
    if (donor == family.size()) {
      ok = false;
      d << "no donor gambler; ";
    } else {
      for (std::size_t i = at; i < jump.rows.size(); ++i) {
        jump.rows[i].gambler_values.beyond_total += 1;
        jump.rows[i].gambler_values.opponents[donor] -= 1;
      }
      auto jf = failing_checks(jump, family);
      d << "2-quantum jump caught by " << join(jf);
      ok = ok && jf == std::vector<std::string>{"bookkeeping"};
    }
    report(8, "validator sensitivity", ok, d.str());
  }

  // 9: byte-identical traces from two CLI invocations
  {
    auto dir = std::filesystem::temp_directory_path();
    auto p1 = dir / ("ivr_accept_" + std::to_string(::getpid()) + "_1.csv");
    auto p2 = dir / ("ivr_accept_" + std::to_string(::getpid()) + "_2.csv");
    const std::string args = "run --oracle seed:42 --opponents builtin:default --stages 10000 --trace ";
    int s1 = run_cli(args + p1.string());
    int s2 = run_cli(args + p2.string());
    std::string x = slurp(p1), y = slurp(p2);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
    bool ok = s1 == 0 && s2 == 0 && !x.empty() && x == y && x == trace_csv(trace);
    report(9, "determinism", ok, std::to_string(x.size()) + " bytes each, identical: " + (x == y ? "yes" : "no"));
  }

  return failures == 0 ? 0 : 1;
}
