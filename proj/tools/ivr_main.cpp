// ivr: run the diagonalization against an opponent family, or sweep the
// clause-2c decision rule against its integer threshold form.

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ivr/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact simulator for diagonalizing against integer-valued martingales"};
  app.require_subcommand(0, 1);

  ivr::RunConfig cfg;
  std::string trace_path;
  std::size_t window = 0;
  auto* run = app.add_subcommand("run", "Build B and optionally verify the trace (default subcommand)");
  run->add_option("--oracle", cfg.oracle_descriptor, "periodic:<bits> | seed:<u64> | prefix:<bits>:<descriptor>")
      ->capture_default_str();
  run->add_option("--opponents", cfg.opponents_path, "<path> | builtin:default | none")->capture_default_str();
  run->add_option("--stages", cfg.stages, "Number of stages")->capture_default_str();
  auto* trace_opt = run->add_option("--trace", trace_path, "Write the trace CSV here");
  run->add_flag("--verify", cfg.verify, "Run every trace check; exit 2 on failure");
  run->add_flag("--summary", cfg.summary, "Print final capitals and opponent status");
  auto* window_opt = run->add_option("--window", window, "Trailing window for Undefeated (default: 10% of stages)");

  std::size_t bound_g = 0, bound_phi = 0, bound_n = 0;
  auto* sweep = app.add_subcommand("sublemma-sweep", "Exhaustively compare the ratio rule with n*G < phi");
  sweep->add_option("bG", bound_g, "Bound on G")->required()->check(CLI::PositiveNumber);
  sweep->add_option("bPhi", bound_phi, "Bound on phi")->required()->check(CLI::PositiveNumber);
  sweep->add_option("bN", bound_n, "Bound on the wager n")->required()->check(CLI::PositiveNumber);

  // Bare flags mean `run`.
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || (args.front() != "run" && args.front() != "sublemma-sweep" && args.front() != "--help" &&
                       args.front() != "-h")) {
    args.insert(args.begin(), "run");
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ivr::exit_ok : ivr::exit_usage;
  }

  if (sweep->parsed()) return ivr::run_sublemma_sweep(bound_g, bound_phi, bound_n, std::cout, std::cerr);

  if (*trace_opt) cfg.trace_out = trace_path;
  if (*window_opt) cfg.undefeated_window = window;
  return ivr::run_experiment(cfg, std::cout, std::cerr);
}
