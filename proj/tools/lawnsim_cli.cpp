// Batch driver: loads a scenario config, runs a named experiment, writes CSV
// artifacts (plus SVG plots on request).
//
// Exit codes: 0 success, 1 config/usage error, 2 runtime or model error,
// 3 validation failure (mc-validate outside its confidence bands).

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lawnsim/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lawnsim - drone handover criteria simulator"};

  std::string experiment;
  std::string out_dir = "out";
  std::optional<std::string> config_path;
  std::vector<std::string> sets;
  std::uint64_t seed = 555;
  int threads = 1;
  bool plots = false;
  bool list = false;
  double perturb = 0.0;

  app.add_option("--experiment", experiment, "experiment name (see --list)");
  app.add_option("--config", config_path, "scenario config file (empty file = defaults)");
  app.add_option("--set", sets, "scenario override key=value (repeatable)")->take_all();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed for stochastic experiments");
  app.add_option("--threads", threads, "worker threads");
  app.add_flag("--plots", plots, "also render SVG plots from the CSVs");
  app.add_flag("--list", list, "list experiment names and exit");
  app.add_option("--perturb", perturb,
                 "mc-validate fault injection: shift analytic probabilities by this amount");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  if (list) {
    for (const auto& n : lawnsim::experiment_names()) std::printf("%s\n", n.c_str());
    return 0;
  }
  if (experiment.empty()) {
    std::fprintf(stderr, "error: --experiment is required (see --list)\n");
    return 1;
  }

  lawnsim::ExperimentSpec spec;
  spec.name = experiment;
  spec.out_dir = out_dir;
  spec.seed = seed;
  spec.threads = threads;
  spec.plots = plots;
  spec.perturbation = perturb;
  try {
    spec.overrides = lawnsim::parse_overrides(sets);
    const auto res = lawnsim::run_experiment(spec, config_path);
    for (const auto& a : res.artifacts) std::printf("wrote %s\n", a.c_str());
    if (!res.validation_pass) {
      std::fprintf(stderr, "validation failure: analytic probabilities outside the CIs\n");
      return 3;
    }
    return 0;
  } catch (const lawnsim::unknown_experiment_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const lawnsim::config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
