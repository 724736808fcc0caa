#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "bsim/config.hpp"
#include "bsim/experiments.hpp"

// Experiment harness.  One subcommand per experiment; flags override config
// file values.  Exit code 0 iff every metric passes.
int main(int argc, char** argv) {
  CLI::App app{"Bayesian-similarity experiment harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  long seed = -1;
  bool quiet = false;
  for (const auto& name : bsim::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the '" + name + "' experiment");
    sub->add_option("--config", config_path, "config file path");
    sub->add_option("--seed", seed, "random seed (overrides config)");
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_flag("--quiet", quiet, "suppress per-metric output");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string experiment = app.get_subcommands()[0]->get_name();

  try {
    bsim::ConfigFile file;
    if (!config_path.empty()) file = bsim::parse_config_file(config_path);
    file.sections["experiment"]["name"] = experiment;
    if (seed >= 0) file.sections["experiment"]["seed"] = std::to_string(seed);
    if (!out_dir.empty()) file.sections["experiment"]["out"] = out_dir;
    if (quiet) file.sections["experiment"]["quiet"] = "true";

    bsim::ExperimentConfig config = bsim::experiment_config_from(file);
    bsim::ExperimentReport report = bsim::run(config);

    if (!config.quiet) {
      std::printf("%s  (%s)\n", report.experiment_id.c_str(), report.config_echo.c_str());
      for (const auto& m : report.metrics)
        std::printf("  %-28s %-14s target %-24s %s\n", m.name.c_str(),
                    bsim::format_double(m.value).c_str(), m.target.c_str(),
                    m.skipped ? "SKIP" : m.pass ? "PASS" : "FAIL");
      std::printf("  wall seconds: %.2f\n", report.wall_seconds);
    }
    return report.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
