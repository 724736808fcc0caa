#include "bsim/generative.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bsim {

namespace {

double normal_pdf(double x, double mean, double var) {
  double d = x - mean;
  return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

void check_probability_vector(const std::vector<double>& p, const char* what,
                              bool allow_zero) {
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0 || (!allow_zero && v == 0.0))
      throw std::invalid_argument(std::string(what) + ": entries must be positive");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument(std::string(what) + ": must sum to 1");
}

}  // namespace

double ClassModel::marginal_density(const Vec& x) const {
  double total = 0.0;
  for (int w = 0; w < class_count(); ++w) total += prior(w) * class_density(w, x);
  return total;
}

std::vector<double> ClassModel::class_posterior(const Vec& x) const {
  const int c = class_count();
  std::vector<double> post(c);
  double total = 0.0;
  for (int w = 0; w < c; ++w) {
    post[w] = prior(w) * class_density(w, x);
    total += post[w];
  }
  if (total <= 0.0)
    throw std::runtime_error("unsupported point: all class densities vanish");
  for (double& v : post) v /= total;
  return post;
}

int ClassModel::sample_label(Rng& rng) const {
  std::vector<double> p(class_count());
  for (int w = 0; w < class_count(); ++w) p[w] = prior(w);
  return rng.categorical(p);
}

std::vector<LabeledSample> ClassModel::sample(std::uint64_t seed, int count) const {
  if (count < 0) throw std::invalid_argument("sample: count must be >= 0");
  Rng rng(seed);
  std::vector<LabeledSample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    int label = sample_label(rng);
    out.push_back({label, sample_point(label, rng)});
  }
  return out;
}

MixtureClassModel::MixtureClassModel(
    std::vector<double> priors,
    std::vector<std::vector<GaussianComponent>> components)
    : priors_(std::move(priors)), components_(std::move(components)) {
  if (priors_.empty() || priors_.size() != components_.size())
    throw std::invalid_argument("model: priors and component lists must match");
  check_probability_vector(priors_, "priors", /*allow_zero=*/false);
  dimension_ = -1;
  for (const auto& comps : components_) {
    if (comps.empty()) throw std::invalid_argument("model: class with no components");
    double wsum = 0.0;
    for (const auto& comp : comps) {
      if (comp.weight <= 0.0) throw std::invalid_argument("model: component weight must be > 0");
      wsum += comp.weight;
      if (dimension_ < 0) dimension_ = static_cast<int>(comp.mean.size());
      if (static_cast<int>(comp.mean.size()) != dimension_ ||
          comp.variance.size() != comp.mean.size())
        throw std::invalid_argument("model: inconsistent component dimensions");
      for (double v : comp.variance)
        if (v <= 0.0) throw std::invalid_argument("model: variance must be > 0");
    }
    if (std::abs(wsum - 1.0) > 1e-12)
      throw std::invalid_argument("model: component weights must sum to 1");
  }
  if (dimension_ < 1) throw std::invalid_argument("model: dimension must be >= 1");
}

double MixtureClassModel::class_density(int label, const Vec& x) const {
  if (static_cast<int>(x.size()) != dimension_)
    throw std::invalid_argument("class_density: dimension mismatch");
  double total = 0.0;
  for (const auto& comp : components_.at(label)) {
    double d = comp.weight;
    for (int k = 0; k < dimension_; ++k) d *= normal_pdf(x[k], comp.mean[k], comp.variance[k]);
    total += d;
  }
  return total;
}

Vec MixtureClassModel::sample_point(int label, Rng& rng) const {
  const auto& comps = components_.at(label);
  std::vector<double> w(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) w[i] = comps[i].weight;
  const auto& comp = comps[rng.categorical(w)];
  Vec x(dimension_);
  for (int k = 0; k < dimension_; ++k)
    x[k] = comp.mean[k] + std::sqrt(comp.variance[k]) * rng.normal();
  return x;
}

MixtureClassModel MixtureClassModel::relabeled(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != class_count())
    throw std::invalid_argument("relabeled: permutation size mismatch");
  std::vector<double> priors(perm.size());
  std::vector<std::vector<GaussianComponent>> comps(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    priors[i] = priors_.at(perm[i]);
    comps[i] = components_.at(perm[i]);
  }
  return MixtureClassModel(std::move(priors), std::move(comps));
}

EvalGrid make_grid(const MixtureClassModel& model, int points_per_dim) {
  if (points_per_dim < 1) throw std::invalid_argument("make_grid: need >= 1 point per dim");
  const int n = model.dimension();
  Vec lo(n, 0.0), hi(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double mn = 1e300, mx = -1e300, max_std = 0.0;
    for (const auto& comps : model.components())
      for (const auto& comp : comps) {
        mn = std::min(mn, comp.mean[k]);
        mx = std::max(mx, comp.mean[k]);
        max_std = std::max(max_std, std::sqrt(comp.variance[k]));
      }
    lo[k] = mn - 6.0 * max_std;
    hi[k] = mx + 6.0 * max_std;
  }
  Vec step(n, 0.0);
  double cell = 1.0;
  for (int k = 0; k < n; ++k) {
    step[k] = points_per_dim > 1 ? (hi[k] - lo[k]) / (points_per_dim - 1) : (hi[k] - lo[k]);
    cell *= (points_per_dim > 1 ? step[k] : (hi[k] - lo[k]));
  }
  EvalGrid grid;
  long total = 1;
  for (int k = 0; k < n; ++k) total *= points_per_dim;
  grid.points.reserve(total);
  grid.weights.reserve(total);
  std::vector<int> idx(n, 0);
  for (long i = 0; i < total; ++i) {
    Vec x(n);
    for (int k = 0; k < n; ++k) x[k] = lo[k] + idx[k] * step[k];
    grid.density.push_back(model.marginal_density(x));
    grid.points.push_back(std::move(x));
    grid.weights.push_back(cell);
    for (int k = n - 1; k >= 0; --k) {
      if (++idx[k] < points_per_dim) break;
      idx[k] = 0;
    }
  }
  return grid;
}

double grid_mass(const ClassModel& model, const EvalGrid& grid) {
  double mass = 0.0;
  for (std::size_t i = 0; i < grid.points.size(); ++i)
    mass += grid.weights[i] * model.marginal_density(grid.points[i]);
  return mass;
}

double bayes_risk(const ClassModel& model, const EvalGrid& grid) {
  if (grid_mass(model, grid) < 0.999)
    throw std::runtime_error("insufficient grid: mass coverage < 0.999");
  double risk = 0.0;
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const Vec& x = grid.points[i];
    double best = 0.0, total = 0.0;
    for (int w = 0; w < model.class_count(); ++w) {
      double joint = model.prior(w) * model.class_density(w, x);
      best = std::max(best, joint);
      total += joint;
    }
    risk += grid.weights[i] * (total - best);
  }
  return risk;
}

MixtureClassModel gauss_pm1_model() {
  return MixtureClassModel({0.5, 0.5},
                           {{{1.0, {-1.0}, {1.0}}}, {{1.0, {1.0}, {1.0}}}});
}

}  // namespace bsim
