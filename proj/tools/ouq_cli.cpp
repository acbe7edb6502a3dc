// ouq: command-line front end over the C API.
//
//   ouq solve <config> [--seed N] [--runs N] [--output-dir DIR]
//   ouq eval <response> <coords...>
//
// Exit codes: 0 success, 1 usage or config error, 2 solver error, 3 I/O error.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ouq/ouq.h"

namespace {

int report(ouq_status status) {
  std::fprintf(stderr, "ouq: %s: %s\n", ouq_status_name(status), ouq_last_error());
  return ouq_exit_code(status);
}

struct SolveArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::string> output_dir;
};

int run_solve(const SolveArgs& args) {
  ouq_config* config = nullptr;
  if (ouq_status s = ouq_config_load(args.config.c_str(), &config); s != OUQ_OK) return report(s);

  ouq_status s = OUQ_OK;
  if (args.seed) s = ouq_config_set_seed(config, *args.seed);
  if (s == OUQ_OK && args.runs) s = ouq_config_set_runs(config, *args.runs);
  if (s == OUQ_OK && args.output_dir) s = ouq_config_set_output_dir(config, args.output_dir->c_str());

  ouq_summary summary{};
  if (s == OUQ_OK) s = ouq_run(config, &summary);
  ouq_config_free(config);
  if (s != OUQ_OK) return report(s);

  std::printf("runs %zu\nbest_run %zu\nbest_bound %.6f\n", summary.runs, summary.best_run,
              summary.best_bound);
  return 0;
}

int run_eval(const std::string& response, const std::vector<double>& coords) {
  double value = 0.0;
  double aux = 0.0;
  int has_aux = 0;
  if (ouq_status s = ouq_eval(response.c_str(), coords.data(), coords.size(), &value, &aux, &has_aux);
      s != OUQ_OK) {
    return report(s);
  }
  std::printf("H = %.6f\n", value);
  if (has_aux) std::printf("v_bl = %.6f\n", aux);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal upper bounds on failure probabilities over product measures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ouq_version()));

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "run the configured optimization and write artifacts");
  solve->add_option("config", solve_args.config, "run configuration (JSON)")->required();
  solve->add_option("--seed", solve_args.seed, "seed of the first run");
  solve->add_option("--runs", solve_args.runs, "number of seeded restarts")->check(CLI::PositiveNumber);
  solve->add_option("--output-dir", solve_args.output_dir, "directory for traces and results");

  std::string response;
  std::vector<double> coords;
  auto* eval = app.add_subcommand("eval", "evaluate a registered response at one point");
  eval->add_option("response", response, "response name, e.g. sphir-perforation")->required();
  eval->add_option("coords", coords, "input coordinates")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*solve) return run_solve(solve_args);
  return run_eval(response, coords);
}
