#include "bsim/classify.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <memory>
#include <stdexcept>

namespace bsim {

Classifier bayes_classifier(std::function<std::vector<double>(const Vec&)> posterior_fn,
                            std::string name) {
  return {std::move(name), [posterior_fn = std::move(posterior_fn)](const Vec& x) {
            auto p = posterior_fn(x);
            int best = 0;
            for (std::size_t w = 1; w < p.size(); ++w)
              if (p[w] > p[best]) best = static_cast<int>(w);
            return best;
          }};
}

Classifier prototype_classifier(const SimilarityOracle& oracle,
                                const std::map<int, Vec>& prototypes, int class_count) {
  for (int w = 0; w < class_count; ++w)
    if (!prototypes.count(w)) throw std::runtime_error("incomplete prototype set");
  auto protos = std::make_shared<std::vector<Vec>>();
  for (int w = 0; w < class_count; ++w) protos->push_back(prototypes.at(w));
  return {"prototype", [oracle, protos](const Vec& x) {
            int best = 0;
            double best_s = -1.0;
            for (std::size_t w = 0; w < protos->size(); ++w) {
              double s = oracle.evaluate(x, (*protos)[w]);
              if (s > best_s) {
                best_s = s;
                best = static_cast<int>(w);
              }
            }
            return best;
          }};
}

Classifier nn_classifier(const SimilarityOracle& oracle,
                         std::vector<LabeledSample> training) {
  if (training.empty()) throw std::runtime_error("nn_classifier: empty training set");
  auto data = std::make_shared<std::vector<LabeledSample>>(std::move(training));
  return {"similarity-1nn", [oracle, data](const Vec& x) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < data->size(); ++i) {
              double d = similarity_distance(oracle, x, (*data)[i].point);
              if (d < best_d) {
                best_d = d;
                best = i;
              }
            }
            return (*data)[best].label;
          }};
}

Classifier reconstructed_classifier(const SimilarityOracle& oracle, const EvalGrid& grid,
                                    const std::vector<LabeledSample>& samples,
                                    const ReconstructionOptions& opts) {
  auto rec = std::make_shared<TwoClassReconstruction>(
      reconstruct_two_class(oracle, grid, samples, opts));
  if (rec->branch == Branch::Undecided) throw std::runtime_error("branch unresolved");
  return {"reconstructed", [rec](const Vec& x) {
            return rec->posterior_at(x) >= 0.5 ? 0 : 1;  // tie to class 0
          }};
}

RiskReport evaluate_risk_quadrature(const Classifier& clf, const ClassModel& model,
                                    const EvalGrid& grid) {
  if (grid_mass(model, grid) < 0.999)
    throw std::runtime_error("insufficient grid: mass coverage < 0.999");
  double risk = 0.0;
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const Vec& x = grid.points[i];
    int d = clf.decide(x);
    double total = 0.0;
    for (int w = 0; w < model.class_count(); ++w)
      total += model.prior(w) * model.class_density(w, x);
    risk += grid.weights[i] * (total - model.prior(d) * model.class_density(d, x));
  }
  return {clf.name, risk, 0.0, "quadrature", static_cast<long>(grid.points.size())};
}

RiskReport evaluate_risk_monte_carlo(const Classifier& clf, const ClassModel& model,
                                     std::uint64_t seed, int count, int workers) {
  auto samples = model.sample(seed, count);
  workers = std::max(workers, 1);
  auto count_errors = [&](std::size_t begin, std::size_t end) {
    long errors = 0;
    for (std::size_t i = begin; i < end; ++i)
      if (clf.decide(samples[i].point) != samples[i].label) ++errors;
    return errors;
  };
  long errors = 0;
  if (workers == 1 || samples.size() < 256) {
    errors = count_errors(0, samples.size());
  } else {
    std::vector<std::future<long>> parts;
    std::size_t chunk = (samples.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      std::size_t begin = w * chunk;
      std::size_t end = std::min(begin + chunk, samples.size());
      if (begin >= end) break;
      parts.push_back(std::async(std::launch::async, count_errors, begin, end));
    }
    for (auto& p : parts) errors += p.get();
  }
  double e = count > 0 ? static_cast<double>(errors) / count : 0.0;
  double se = count > 0 ? std::sqrt(e * (1.0 - e) / count) : 0.0;
  return {clf.name, e, se, "monte-carlo", count};
}

}  // namespace bsim
