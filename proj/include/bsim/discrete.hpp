#pragma once

#include "bsim/generative.hpp"

namespace bsim {

// Finite-support model for tests that need exact enumeration instead of
// quadrature.  Zero class priors are permitted here (the batched
// counterexamples need them); MixtureClassModel keeps its strict check.
class DiscreteClassModel final : public ClassModel {
 public:
  // cond[w][k] = P(x = support[k] | w)
  DiscreteClassModel(std::vector<Vec> support, std::vector<double> priors,
                     std::vector<std::vector<double>> cond);

  int class_count() const override { return static_cast<int>(priors_.size()); }
  int dimension() const override { return static_cast<int>(support_[0].size()); }
  double prior(int label) const override { return priors_.at(label); }
  double class_density(int label, const Vec& x) const override;
  Vec sample_point(int label, Rng& rng) const override;

  const std::vector<Vec>& support() const { return support_; }
  // index of x within the support, or -1
  int support_index(const Vec& x) const;

  // enumeration grid: every support point with unit weight
  EvalGrid support_grid() const;

 private:
  std::vector<Vec> support_;
  std::vector<double> priors_;
  std::vector<std::vector<double>> cond_;
};

}  // namespace bsim
