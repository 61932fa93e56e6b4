#pragma once

// Batch runs: oracle + opponent family + stage count -> trace, CSV and
// verification summary. Exit codes: 0 success, 1 usage or I/O, 2 failed
// verification.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ivr/construction.hpp"
#include "ivr/opponents.hpp"
#include "ivr/oracle.hpp"
#include "ivr/trace_csv.hpp"
#include "ivr/verify.hpp"

namespace ivr {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_verify_failed = 2 };

struct RunConfig {
  std::string oracle_descriptor = "seed:42";
  std::string opponents_path = "builtin:default";  // or `none`, or a file
  std::size_t stages = 1000;
  std::optional<std::string> trace_out;
  bool verify = false;
  bool summary = false;
  std::optional<std::size_t> undefeated_window;
};

/// Reads the spec list named by `source`.
inline std::vector<StrategySpec> load_opponent_specs(const std::string& source) {
  if (source == "builtin:default") return default_family_specs();
  if (source == "none") return {};
  std::ifstream in(source, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read opponents file '" + source + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_strategy_spec(text.str());
}

/// Writes to a sibling temporary file, then renames it over `path`.
inline void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

inline int run_experiment(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::optional<OracleSequence> oracle;
  std::vector<OpponentStrategy> family;
  try {
    oracle = parse_oracle(config.oracle_descriptor);
    family = make_family(load_opponent_specs(config.opponents_path), *oracle);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  BuildResult built = build_b(*oracle, family, config.stages);
  const Trace& trace = built.trace;

  if (config.trace_out) {
    try {
      write_file_atomically(*config.trace_out, trace_csv(trace));
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return exit_usage;
    }
  }

  DefeatReport defeat = analyze_defeat(trace, family, config.undefeated_window);
  if (config.summary || config.verify) {
    out << "oracle: " << oracle->description() << '\n';
    out << "stages: " << trace.rows.size() << '\n';
    out << "final M capital: " << built.state.adversary_capital() << '\n';
    out << "gamblers past the family funded: " << built.state.gambler_values().beyond_count << '\n';
    for (std::size_t e = 0; e < family.size(); ++e) {
      const OpponentDefeat& d = defeat.opponents[e];
      const ActivityStatus st = built.state.activity(e);
      out << "opponent " << e << " " << d.name << " [" << flavor_name(family[e].flavor()) << "]: "
          << to_string(d.status) << " last_bet_stage="
          << (d.last_bet_stage ? std::to_string(*d.last_bet_stage) : std::string("none"))
          << " bets=" << d.bets << " sup_capital=" << d.sup_capital << " final=" << d.final_value
          << " G=" << built.state.gambler(e)
          << " activity=" << (st.active ? std::string("Active")
                                        : std::string("Inactive(") + to_string(st.reason) + "@" +
                                              std::to_string(st.at_stage) + ")")
          << '\n';
    }
  }

  if (!config.verify) return exit_ok;

  bool all_ok = true;
  for (const auto& [name, result] : verify_trace(trace, family)) {
    out << (result.ok ? "PASS " : "FAIL ") << name << " (" << result.checked << " checked)";
    if (!result.ok) out << ": " << result.detail;
    out << '\n';
    all_ok = all_ok && result.ok;
  }
  return all_ok ? exit_ok : exit_verify_failed;
}

inline int run_sublemma_sweep(std::size_t bound_g, std::size_t bound_phi, std::size_t bound_n, std::ostream& out,
                              std::ostream& err) {
  if (bound_g == 0 || bound_phi == 0 || bound_n == 0) {
    err << "error: sweep bounds must be >= 1\n";
    return exit_usage;
  }
  auto t0 = std::chrono::steady_clock::now();
  SublemmaSweepReport rep = check_sublemma_equivalence(bound_g, bound_phi, bound_n);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& c : rep.counterexamples) {
    out << "counterexample G=" << c.gambler << " phi=" << c.phi << " n=" << c.n << " rule=" << c.decision
        << " threshold=" << c.oracle << '\n';
  }
  out << "checked " << rep.cases << " cases in " << std::fixed << std::setprecision(3) << secs << "s\n";
  if (rep.ok()) {
    out << "verified 0 counterexamples\n";
    return exit_ok;
  }
  out << rep.counterexamples.size() << " counterexamples\n";
  return exit_verify_failed;
}

}  // namespace ivr
