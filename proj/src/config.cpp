#include "bsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bsim {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  auto end = s.find_last_not_of(" \t\r");
  return begin == std::string::npos ? "" : s.substr(begin, end - begin + 1);
}

std::vector<double> parse_doubles(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw std::runtime_error("invalid config field '" + field + "': bad number '" + tok + "'");
    }
  }
  return out;
}

long parse_long(const std::string& text, const std::string& field) {
  try {
    std::size_t pos = 0;
    long v = std::stol(trim(text), &pos);
    if (pos != trim(text).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("invalid config field '" + field + "': expected integer, got '" +
                             text + "'");
  }
}

}  // namespace

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto it = sections.find(section);
  return it != sections.end() && it->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  auto it = sections.find(section);
  if (it == sections.end()) return fallback;
  auto jt = it->second.find(key);
  return jt == it->second.end() ? fallback : jt->second;
}

ConfigFile parse_config_text(const std::string& text) {
  ConfigFile file;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      file.sections[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(line_no) + ": empty key");
    file.sections[section][key] = value;
  }
  return file;
}

ConfigFile parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "reconstruct2",     "multiclass", "classify-compare", "hierarchical-gap",
      "batched-nn",       "discriminate", "threshold-sweep"};
  return names;
}

ExperimentConfig experiment_config_from(const ConfigFile& file) {
  ExperimentConfig cfg;
  cfg.raw = file;
  cfg.experiment = file.get("experiment", "name", "");
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
    throw std::runtime_error("invalid config field 'experiment.name': unknown experiment '" +
                             cfg.experiment + "'");
  cfg.seed = static_cast<std::uint64_t>(parse_long(file.get("experiment", "seed", "1"),
                                                   "experiment.seed"));
  cfg.out_dir = file.get("experiment", "out", "out");
  cfg.quiet = file.get("experiment", "quiet", "false") == "true";
  cfg.model_preset = file.get("model", "preset", file.has("model", "classes") ? "" : "gauss_pm1");

  auto size = [&](const char* key, int fallback) {
    int v = static_cast<int>(parse_long(file.get("sizes", key, std::to_string(fallback)),
                                        std::string("sizes.") + key));
    if (v < 0) throw std::runtime_error(std::string("invalid config field 'sizes.") + key +
                                        "': must be >= 0");
    return v;
  };
  cfg.grid_points = size("grid", cfg.grid_points);
  cfg.sample_count = size("samples", cfg.sample_count);
  cfg.train_count = size("train", cfg.train_count);
  cfg.test_count = size("test", cfg.test_count);
  cfg.batch_count = size("batches", cfg.batch_count);
  cfg.batch_size = size("batch_size", cfg.batch_size);
  cfg.instance_count = size("instances", cfg.instance_count);
  cfg.restarts = size("restarts", cfg.restarts);
  cfg.classes = size("classes", cfg.classes);
  cfg.points = size("points", cfg.points);
  cfg.trial_count = size("trials", cfg.trial_count);
  cfg.threshold_count = size("thresholds", cfg.threshold_count);
  return cfg;
}

std::string ExperimentConfig::echo() const {
  std::ostringstream out;
  out << "experiment=" << experiment << " seed=" << seed << " model=" << model_preset
      << " grid=" << grid_points << " samples=" << sample_count << " train=" << train_count
      << " test=" << test_count << " batches=" << batch_count << " batch_size=" << batch_size
      << " instances=" << instance_count << " restarts=" << restarts << " classes=" << classes
      << " points=" << points << " trials=" << trial_count << " thresholds=" << threshold_count;
  return out.str();
}

MixtureClassModel model_from_config(const ExperimentConfig& config) {
  if (config.model_preset == "gauss_pm1") return gauss_pm1_model();
  if (!config.model_preset.empty())
    throw std::runtime_error("invalid config field 'model.preset': unknown preset '" +
                             config.model_preset + "'");

  const auto& file = config.raw;
  int classes = static_cast<int>(parse_long(file.get("model", "classes", ""), "model.classes"));
  if (classes < 1) throw std::runtime_error("invalid config field 'model.classes': must be >= 1");
  std::vector<double> priors = parse_doubles(file.get("model", "priors", ""), "model.priors");
  if (static_cast<int>(priors.size()) != classes)
    throw std::runtime_error("invalid config field 'model.priors': need one prior per class");

  std::vector<std::vector<GaussianComponent>> components(classes);
  for (int w = 0; w < classes; ++w) {
    std::string key = "class" + std::to_string(w);
    if (!file.has("model", key))
      throw std::runtime_error("invalid config field 'model." + key + "': missing class spec");
    // components separated by ';', each "weight : mean... : var..."
    std::istringstream comps(file.get("model", key, ""));
    std::string comp_text;
    while (std::getline(comps, comp_text, ';')) {
      std::istringstream fields(comp_text);
      std::string w_text, mean_text, var_text;
      if (!std::getline(fields, w_text, ':') || !std::getline(fields, mean_text, ':') ||
          !std::getline(fields, var_text, ':'))
        throw std::runtime_error("invalid config field 'model." + key +
                                 "': expected 'weight : means : variances'");
      GaussianComponent comp;
      comp.weight = parse_doubles(w_text, "model." + key).at(0);
      comp.mean = parse_doubles(mean_text, "model." + key);
      comp.variance = parse_doubles(var_text, "model." + key);
      components[w].push_back(std::move(comp));
    }
    if (components[w].empty())
      throw std::runtime_error("invalid config field 'model." + key + "': no components");
  }
  return MixtureClassModel(std::move(priors), std::move(components));
}

}  // namespace bsim
