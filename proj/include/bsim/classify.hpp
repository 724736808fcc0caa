#pragma once

#include <functional>
#include <map>
#include <string>

#include "bsim/generative.hpp"
#include "bsim/reconstruction.hpp"
#include "bsim/similarity.hpp"

namespace bsim {

struct Classifier {
  std::string name;
  std::function<int(const Vec&)> decide;  // deterministic; ties to lowest index
};

// argmax_w posterior(x), ties to lowest index
Classifier bayes_classifier(std::function<std::vector<double>(const Vec&)> posterior_fn,
                            std::string name = "bayes");

// argmax_w oracle(x, prototype_w); requires one prototype per class
Classifier prototype_classifier(const SimilarityOracle& oracle,
                                const std::map<int, Vec>& prototypes, int class_count);

// label of the training point minimizing 1 - oracle(x, x_i); ties to lowest index
Classifier nn_classifier(const SimilarityOracle& oracle,
                         std::vector<LabeledSample> training);

// reconstruct_two_class, then argmax on the recovered posterior; off-grid
// queries use the nearest grid point
Classifier reconstructed_classifier(const SimilarityOracle& oracle, const EvalGrid& grid,
                                    const std::vector<LabeledSample>& samples,
                                    const ReconstructionOptions& opts = {});

struct RiskReport {
  std::string classifier_name;
  double error_rate = 0.0;
  double stderr_value = 0.0;  // 0 for quadrature
  std::string method;         // "quadrature" or "monte-carlo"
  long sample_count = 0;
};

RiskReport evaluate_risk_quadrature(const Classifier& clf, const ClassModel& model,
                                    const EvalGrid& grid);

// shards by sample index; the merged count is independent of worker count
RiskReport evaluate_risk_monte_carlo(const Classifier& clf, const ClassModel& model,
                                     std::uint64_t seed, int count, int workers = 1);

}  // namespace bsim
