#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bsim/generative.hpp"

namespace bsim {

// Flat sectioned key/value text:
//   [section]
//   key = value          (values may be space-separated lists)
//   # comment
struct ConfigFile {
  std::map<std::string, std::map<std::string, std::string>> sections;

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
};

ConfigFile parse_config_text(const std::string& text);
ConfigFile parse_config_file(const std::string& path);

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  bool quiet = false;

  // model: preset name, or explicit [model] section carried along
  std::string model_preset = "gauss_pm1";
  ConfigFile raw;  // retained for explicit model specs and the config echo

  // sizes
  int grid_points = 41;
  int sample_count = 200;
  int train_count = 10000;
  int test_count = 10000;
  int batch_count = 1000;
  int batch_size = 6;
  int instance_count = 50;
  int restarts = 20;
  int classes = 3;
  int points = 7;
  int trial_count = 100000;
  int threshold_count = 21;

  // deterministic one-line echo of everything that affects the outputs
  std::string echo() const;
};

// throws std::runtime_error naming the offending field on bad input
ExperimentConfig experiment_config_from(const ConfigFile& file);

// parse a [model] section into a mixture model, or build the named preset
MixtureClassModel model_from_config(const ExperimentConfig& config);

const std::vector<std::string>& experiment_names();

}  // namespace bsim
