#include "bsim/hierarchical.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bsim/discrete.hpp"

namespace bsim {

BatchedModel::BatchedModel(std::vector<double> probs,
                           std::vector<std::shared_ptr<const ClassModel>> models, int m)
    : theta_probs(std::move(probs)), conditionals(std::move(models)), batch_size(m) {
  if (theta_probs.empty() || theta_probs.size() != conditionals.size())
    throw std::invalid_argument("batched model: theta support mismatch");
  double sum = 0.0;
  for (double p : theta_probs) {
    if (p < 0.0) throw std::invalid_argument("batched model: negative prior");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("batched model: theta prior must sum to 1");
  for (const auto& cm : conditionals) {
    if (!cm) throw std::invalid_argument("batched model: null conditional");
    if (cm->class_count() != conditionals[0]->class_count() ||
        cm->dimension() != conditionals[0]->dimension())
      throw std::invalid_argument("batched model: conditionals must share shape");
  }
  if (batch_size < 1) throw std::invalid_argument("batched model: batch size must be >= 1");
}

std::vector<Batch> sample_batches(const BatchedModel& model, std::uint64_t seed,
                                  int batch_count) {
  if (batch_count < 0) throw std::invalid_argument("sample_batches: count must be >= 0");
  Rng rng(seed);
  std::vector<Batch> out;
  out.reserve(batch_count);
  for (int b = 0; b < batch_count; ++b) {
    Batch batch;
    batch.theta_index = rng.categorical(model.theta_probs);
    const auto& cm = *model.conditionals[batch.theta_index];
    for (int i = 0; i < model.batch_size; ++i) {
      int label = cm.sample_label(rng);
      batch.samples.push_back({label, cm.sample_point(label, rng)});
    }
    out.push_back(std::move(batch));
  }
  return out;
}

double marginal_class_conditional(const BatchedModel& model, int label, const Vec& x) {
  double total = 0.0;
  for (std::size_t t = 0; t < model.theta_probs.size(); ++t)
    total += model.theta_probs[t] * model.conditionals[t]->class_density(label, x);
  return total;
}

double batch_class_conditional(const BatchedModel& model, const std::vector<int>& labels,
                               const std::vector<Vec>& points) {
  if (labels.size() != points.size())
    throw std::invalid_argument("batch_class_conditional: length mismatch");
  double total = 0.0;
  for (std::size_t t = 0; t < model.theta_probs.size(); ++t) {
    double prod = model.theta_probs[t];
    for (std::size_t i = 0; i < labels.size(); ++i)
      prod *= model.conditionals[t]->class_density(labels[i], points[i]);
    total += prod;
  }
  return total;
}

std::vector<double> marginal_posterior(const BatchedModel& model, const Vec& x) {
  const int c = model.class_count();
  std::vector<double> post(c, 0.0);
  double total = 0.0;
  for (std::size_t t = 0; t < model.theta_probs.size(); ++t) {
    const auto& cm = *model.conditionals[t];
    for (int w = 0; w < c; ++w) {
      double v = model.theta_probs[t] * cm.prior(w) * cm.class_density(w, x);
      post[w] += v;
      total += v;
    }
  }
  if (total <= 0.0)
    throw std::runtime_error("unsupported point: all class densities vanish");
  for (double& v : post) v /= total;
  return post;
}

double batched_similarity(const BatchedModel& model, const Vec& x, const Vec& xp) {
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < model.theta_probs.size(); ++t) {
    const auto& cm = *model.conditionals[t];
    double px = cm.marginal_density(x);
    double pxp = cm.marginal_density(xp);
    double w = model.theta_probs[t] * px * pxp;
    if (w <= 0.0) continue;
    auto post_x = cm.class_posterior(x);
    auto post_xp = cm.class_posterior(xp);
    double agree = 0.0;
    for (std::size_t i = 0; i < post_x.size(); ++i) agree += post_x[i] * post_xp[i];
    num += w * agree;
    den += w;
  }
  if (den <= 0.0)
    throw std::runtime_error("unsupported point: pair has zero density under every theta");
  return num / den;
}

double marginal_similarity(const BatchedModel& model, const Vec& x, const Vec& xp) {
  auto p = marginal_posterior(model, x);
  auto q = marginal_posterior(model, xp);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * q[i];
  return s;
}

double factorization_gap(const BatchedModel& model, const Vec& x, const Vec& xp) {
  return std::abs(batched_similarity(model, x, xp) - marginal_similarity(model, x, xp));
}

SimilarityOracle batched_similarity_oracle(std::shared_ptr<const BatchedModel> model) {
  SimilarityOracle oracle;
  oracle.provenance = Provenance::exact;
  oracle.dimension = model->dimension();
  oracle.evaluate = [model](const Vec& x, const Vec& xp) {
    return batched_similarity(*model, x, xp);
  };
  return oracle;
}

SimilarityOracle marginal_similarity_oracle(std::shared_ptr<const BatchedModel> model) {
  SimilarityOracle oracle;
  oracle.provenance = Provenance::exact;
  oracle.dimension = model->dimension();
  oracle.evaluate = [model](const Vec& x, const Vec& xp) {
    return marginal_similarity(*model, x, xp);
  };
  return oracle;
}

std::vector<LabeledPair> batched_training_pairs(const std::vector<Batch>& batches) {
  std::vector<LabeledPair> out;
  for (const auto& batch : batches)
    for (std::size_t i = 0; i < batch.samples.size(); ++i)
      for (std::size_t j = i + 1; j < batch.samples.size(); ++j)
        out.push_back({batch.samples[i].point, batch.samples[j].point,
                       batch.samples[i].label == batch.samples[j].label});
  return out;
}

namespace {

int nn_label(const std::vector<LabeledSample>& labeled, const Vec& query,
             const std::function<double(const Vec&, const Vec&)>& dist) {
  if (labeled.empty()) throw std::runtime_error("batched_nn_classify: empty labeled subset");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    double d = dist(query, labeled[i].point);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return labeled[best].label;
}

}  // namespace

int batched_nn_classify(const BatchedModel& model, const std::vector<LabeledSample>& labeled,
                        const Vec& query) {
  return nn_label(labeled, query, [&model](const Vec& a, const Vec& b) {
    return 1.0 - batched_similarity(model, a, b);
  });
}

int batched_nn_classify(const SimilarityOracle& oracle,
                        const std::vector<LabeledSample>& labeled, const Vec& query) {
  return nn_label(labeled, query, [&oracle](const Vec& a, const Vec& b) {
    return similarity_distance(oracle, a, b);
  });
}

double expected_nn_disagreement(const BatchedModel& model, BatchDistance distance,
                                int labeled_count) {
  if (labeled_count < 1)
    throw std::invalid_argument("expected_nn_disagreement: need >= 1 labeled sample");
  const auto* first = dynamic_cast<const DiscreteClassModel*>(model.conditionals[0].get());
  if (!first)
    throw std::invalid_argument("expected_nn_disagreement: discrete conditionals required");
  const auto& support = first->support();
  const int c = model.class_count();
  const int k = static_cast<int>(support.size());
  const int states = c * k;  // (label, point) pairs

  auto dist = [&](const Vec& a, const Vec& b) {
    switch (distance) {
      case BatchDistance::BatchedSimilarity: return 1.0 - batched_similarity(model, a, b);
      case BatchDistance::MarginalSimilarity: return 1.0 - marginal_similarity(model, a, b);
      default: {
        double s = 0.0;
        for (std::size_t d = 0; d < a.size(); ++d) {
          double t = a[d] - b[d];
          s += t * t;
        }
        return std::sqrt(s);
      }
    }
  };

  double disagreement = 0.0;
  std::vector<int> config(labeled_count + 1, 0);  // last entry is the query
  while (true) {
    std::vector<LabeledSample> labeled;
    for (int i = 0; i < labeled_count; ++i)
      labeled.push_back({config[i] / k, support[config[i] % k]});
    int query_label = config[labeled_count] / k;
    const Vec& query = support[config[labeled_count] % k];

    double mass = 0.0;
    for (std::size_t t = 0; t < model.theta_probs.size(); ++t) {
      const auto& cm = *model.conditionals[t];
      double prod = model.theta_probs[t];
      for (const auto& s : labeled) prod *= cm.prior(s.label) * cm.class_density(s.label, s.point);
      prod *= cm.prior(query_label) * cm.class_density(query_label, query);
      mass += prod;
    }
    if (mass > 0.0) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < labeled.size(); ++i) {
        double d = dist(query, labeled[i].point);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      if (labeled[best].label != query_label) disagreement += mass;
    }

    int pos = labeled_count;
    while (pos >= 0 && ++config[pos] == states) config[pos--] = 0;
    if (pos < 0) break;
  }
  return disagreement;
}

BatchedModel factorization_counterexample() {
  // two support points, labels fully determined by theta
  std::vector<Vec> support = {{0.0}, {1.0}};
  auto theta_a = std::make_shared<DiscreteClassModel>(
      support, std::vector<double>{1.0, 0.0},
      std::vector<std::vector<double>>{{0.5, 0.5}, {0.5, 0.5}});
  auto theta_b = std::make_shared<DiscreteClassModel>(
      support, std::vector<double>{0.0, 1.0},
      std::vector<std::vector<double>>{{0.5, 0.5}, {0.5, 0.5}});
  return BatchedModel({0.5, 0.5}, {theta_a, theta_b}, 2);
}

BatchedModel shifted_gaussian_batched_model(double delta, int batch_size) {
  auto shifted = [](double shift) {
    return std::make_shared<MixtureClassModel>(
        std::vector<double>{0.5, 0.5},
        std::vector<std::vector<GaussianComponent>>{{{1.0, {-1.0 + shift}, {1.0}}},
                                                    {{1.0, {1.0 + shift}, {1.0}}}});
  };
  return BatchedModel({0.5, 0.5}, {shifted(-delta), shifted(delta)}, batch_size);
}

}  // namespace bsim
