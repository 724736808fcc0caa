#include "bsim/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bsim {

SimilarityOracle exact_similarity(std::shared_ptr<const ClassModel> model) {
  if (!model) throw std::invalid_argument("exact_similarity: null model");
  SimilarityOracle oracle;
  oracle.provenance = Provenance::exact;
  oracle.dimension = model->dimension();
  oracle.evaluate = [model](const Vec& x, const Vec& xp) {
    auto p = model->class_posterior(x);
    auto q = model->class_posterior(xp);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * q[i];
    return s;
  };
  return oracle;
}

namespace {

double sq_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

SimilarityOracle estimate_similarity(const std::vector<LabeledPair>& pairs,
                                     double bandwidth, Provenance provenance) {
  if (pairs.empty()) throw std::invalid_argument("no training pairs");
  if (bandwidth <= 0.0) throw std::invalid_argument("estimate_similarity: bandwidth must be > 0");

  auto data = std::make_shared<std::vector<LabeledPair>>(pairs);
  const double inv_two_h2 = 1.0 / (2.0 * bandwidth * bandwidth);

  SimilarityOracle oracle;
  oracle.provenance = provenance;
  oracle.dimension = static_cast<int>(pairs[0].a.size());
  oracle.evaluate = [data, inv_two_h2](const Vec& x, const Vec& xp) {
    // log-sum-exp over both orientations so far-away queries do not underflow
    double max_log = -1e300;
    std::vector<double> logs;
    logs.reserve(2 * data->size());
    for (const auto& pr : *data) {
      double l1 = -(sq_dist(x, pr.a) + sq_dist(xp, pr.b)) * inv_two_h2;
      double l2 = -(sq_dist(x, pr.b) + sq_dist(xp, pr.a)) * inv_two_h2;
      logs.push_back(l1);
      logs.push_back(l2);
      max_log = std::max({max_log, l1, l2});
    }
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < logs.size(); ++k) {
      double w = std::exp(logs[k] - max_log);
      den += w;
      if ((*data)[k / 2].same) num += w;
    }
    return std::clamp(num / den, 0.0, 1.0);
  };
  return oracle;
}

double silverman_bandwidth(const std::vector<LabeledPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("no training pairs");
  double sum = 0.0, sum2 = 0.0;
  long count = 0;
  for (const auto& pr : pairs) {
    for (double v : pr.a) { sum += v; sum2 += v * v; ++count; }
    for (double v : pr.b) { sum += v; sum2 += v * v; ++count; }
  }
  double mean = sum / count;
  double var = std::max(sum2 / count - mean * mean, 1e-12);
  const double d = 2.0 * pairs[0].a.size();
  const double m = static_cast<double>(pairs.size());
  return 1.06 * std::sqrt(var) * std::pow(m, -1.0 / (d + 4.0));
}

std::vector<LabeledPair> all_pairs(const std::vector<LabeledSample>& samples) {
  std::vector<LabeledPair> out;
  out.reserve(samples.size() * (samples.size() - 1) / 2);
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j)
      out.push_back({samples[i].point, samples[j].point,
                     samples[i].label == samples[j].label});
  return out;
}

double similarity_distance(const SimilarityOracle& oracle, const Vec& x, const Vec& xp) {
  return 1.0 - oracle.evaluate(x, xp);
}

}  // namespace bsim
