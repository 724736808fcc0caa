#pragma once

#include <string>
#include <vector>

#include "bsim/config.hpp"

namespace bsim {

struct MetricRow {
  std::string name;
  double value = 0.0;
  std::string target;  // human-readable threshold this row is checked against
  bool pass = false;
  bool skipped = false;
};

struct ExperimentReport {
  std::string experiment_id;
  std::string config_echo;
  std::vector<MetricRow> metrics;
  double wall_seconds = 0.0;

  bool all_pass() const;
};

// Executes the named experiment deterministically for the given seed and
// writes its CSV files under config.out_dir.  Identical config + seed yields
// byte-identical CSV output.
ExperimentReport run(const ExperimentConfig& config);

// metrics.csv: header row, one metric per row, floats with 12 significant digits
void emit_csv(const ExperimentReport& report, const std::string& path);

void write_summary(const ExperimentReport& report, const std::string& path);

std::string format_double(double v);  // %.12g, shared by every CSV writer

// random two-class 1-D mixture with moderate overlap, for round-trip sweeps
MixtureClassModel random_two_class_model(std::uint64_t seed);

struct RoundTripResult {
  double max_error;     // against the true posterior
  bool branch_correct;  // recovered the true field rather than its flip
};

// exact-oracle reconstruction of `model` on a grid, checked against ground truth
RoundTripResult round_trip(const MixtureClassModel& model, int grid_points, int sample_count,
                           std::uint64_t seed);

}  // namespace bsim
