#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "bsim/generative.hpp"

namespace bsim {

enum class Provenance { exact, pair_estimated, batched_estimated };

// Evaluable map (x, x') -> P(same | x, x') in [0, 1].
struct SimilarityOracle {
  std::function<double(const Vec&, const Vec&)> evaluate;
  Provenance provenance = Provenance::exact;
  int dimension = 0;
};

// P(same|x,x') = sum_i P(w=i|x) P(w=i|x') from the ground-truth posteriors
SimilarityOracle exact_similarity(std::shared_ptr<const ClassModel> model);

struct LabeledPair {
  Vec a;
  Vec b;
  bool same;
};

// Nadaraya-Watson regression of the same-indicator over the concatenated
// pair space, symmetrized by averaging the (x,x') and (x',x) queries.
SimilarityOracle estimate_similarity(const std::vector<LabeledPair>& pairs,
                                     double bandwidth,
                                     Provenance provenance = Provenance::pair_estimated);

// Silverman-style default bandwidth from the pooled pair coordinates
double silverman_bandwidth(const std::vector<LabeledPair>& pairs);

// pairs (x_i, x_j, label_i == label_j) for all i < j
std::vector<LabeledPair> all_pairs(const std::vector<LabeledSample>& samples);

// d(x,x') = 1 - P(same|x,x')
double similarity_distance(const SimilarityOracle& oracle, const Vec& x, const Vec& xp);

}  // namespace bsim
