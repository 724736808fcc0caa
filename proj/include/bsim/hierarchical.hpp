#pragma once

#include <memory>
#include <vector>

#include "bsim/generative.hpp"
#include "bsim/similarity.hpp"

namespace bsim {

// Finite distribution over task parameters theta, each with its own
// conditional classification model sharing class count and dimension.
struct BatchedModel {
  std::vector<double> theta_probs;
  std::vector<std::shared_ptr<const ClassModel>> conditionals;
  int batch_size = 2;

  BatchedModel(std::vector<double> probs,
               std::vector<std::shared_ptr<const ClassModel>> models, int m);

  int class_count() const { return conditionals[0]->class_count(); }
  int dimension() const { return conditionals[0]->dimension(); }
};

struct Batch {
  int theta_index;  // hidden; test-only visibility
  std::vector<LabeledSample> samples;
};

// each batch draws theta, then batch_size i.i.d. samples from that conditional
std::vector<Batch> sample_batches(const BatchedModel& model, std::uint64_t seed,
                                  int batch_count);

// P(x|w) = sum_theta P(x|w,theta) P(theta)
double marginal_class_conditional(const BatchedModel& model, int label, const Vec& x);

// P(x_1..m|w_1..m) = sum_theta prod_i P(x_i|w_i,theta) P(theta); does not
// factor into per-sample marginals in general
double batch_class_conditional(const BatchedModel& model, const std::vector<int>& labels,
                               const std::vector<Vec>& points);

// P(w=i|x) after marginalizing theta
std::vector<double> marginal_posterior(const BatchedModel& model, const Vec& x);

// P(same|x,x') for two feature vectors from one batch: theta weighted by the
// pair evidence P(x|theta) P(x'|theta) P(theta)
double batched_similarity(const BatchedModel& model, const Vec& x, const Vec& xp);

// the factorized product sum_i P(w=i|x) P(w=i|x') over marginal posteriors
double marginal_similarity(const BatchedModel& model, const Vec& x, const Vec& xp);

// |batched_similarity - marginal_similarity|
double factorization_gap(const BatchedModel& model, const Vec& x, const Vec& xp);

SimilarityOracle batched_similarity_oracle(std::shared_ptr<const BatchedModel> model);
SimilarityOracle marginal_similarity_oracle(std::shared_ptr<const BatchedModel> model);

// within-batch pairs for batched training of an estimated oracle
std::vector<LabeledPair> batched_training_pairs(const std::vector<Batch>& batches);

// 1-NN over the labeled subset with distance 1 - batched_similarity
int batched_nn_classify(const BatchedModel& model, const std::vector<LabeledSample>& labeled,
                        const Vec& query);

// same, but with an arbitrary similarity oracle (e.g. a batched-estimated one)
int batched_nn_classify(const SimilarityOracle& oracle,
                        const std::vector<LabeledSample>& labeled, const Vec& query);

enum class BatchDistance { BatchedSimilarity, MarginalSimilarity, Euclidean };

// Exact expected probability that the query label differs from its selected
// neighbor's label, enumerated over all batches of `labeled_count` labeled
// samples plus one query.  Requires discrete conditionals.
double expected_nn_disagreement(const BatchedModel& model, BatchDistance distance,
                                int labeled_count);

// deterministic-theta counterexample: labels are a function of theta alone,
// so batched similarity is 1 while marginal posteriors are uniform
BatchedModel factorization_counterexample();

// theta in {-delta, +delta} shifts both class means of the +-1 Gaussian pair
BatchedModel shifted_gaussian_batched_model(double delta, int batch_size);

}  // namespace bsim
