#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bsim/rng.hpp"

namespace bsim {

using Vec = std::vector<double>;

struct LabeledSample {
  int label;
  Vec point;
};

// Ground-truth classification model: exact priors, class-conditional
// densities and posteriors.  Everything downstream is verified against one
// of these.
class ClassModel {
 public:
  virtual ~ClassModel() = default;

  virtual int class_count() const = 0;
  virtual int dimension() const = 0;
  virtual double prior(int label) const = 0;
  virtual double class_density(int label, const Vec& x) const = 0;
  virtual Vec sample_point(int label, Rng& rng) const = 0;

  // P(x) = sum_w P(w) P(x|w)
  double marginal_density(const Vec& x) const;

  // P(w|x); throws if every class density underflows to zero at x.
  std::vector<double> class_posterior(const Vec& x) const;

  int sample_label(Rng& rng) const;

  // i.i.d. draws from P(w, x), deterministic given seed
  std::vector<LabeledSample> sample(std::uint64_t seed, int count) const;
};

struct GaussianComponent {
  double weight;
  Vec mean;
  Vec variance;  // axis-aligned
};

// Per-class axis-aligned Gaussian mixtures over R^n.  Closed-form densities
// make posteriors and risks exactly evaluable.
class MixtureClassModel final : public ClassModel {
 public:
  MixtureClassModel(std::vector<double> priors,
                    std::vector<std::vector<GaussianComponent>> components);

  int class_count() const override { return static_cast<int>(priors_.size()); }
  int dimension() const override { return dimension_; }
  double prior(int label) const override { return priors_.at(label); }
  double class_density(int label, const Vec& x) const override;
  Vec sample_point(int label, Rng& rng) const override;

  const std::vector<std::vector<GaussianComponent>>& components() const { return components_; }
  const std::vector<double>& priors() const { return priors_; }

  // same joint distribution, class indices permuted: new class i is old perm[i]
  MixtureClassModel relabeled(const std::vector<int>& perm) const;

 private:
  std::vector<double> priors_;
  std::vector<std::vector<GaussianComponent>> components_;
  int dimension_;
};

// Quadrature stand-in for integrals over x.
struct EvalGrid {
  std::vector<Vec> points;
  std::vector<double> weights;
  std::vector<double> density;  // marginal density per point (ones if unknown)
};

// Uniform rectangle rule over the bounding box of all component means
// +/- 6 max standard deviations per axis.
EvalGrid make_grid(const MixtureClassModel& model, int points_per_dim);

// total probability mass the grid accounts for
double grid_mass(const ClassModel& model, const EvalGrid& grid);

// E_x[1 - max_w P(w|x)]; throws "insufficient grid" if mass coverage < 0.999
double bayes_risk(const ClassModel& model, const EvalGrid& grid);

// convenience: two equal-prior unit-variance 1-D Gaussians at -1 and +1
MixtureClassModel gauss_pm1_model();

}  // namespace bsim
