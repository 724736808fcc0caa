#include "bsim/discrete.hpp"

#include <cmath>
#include <stdexcept>

namespace bsim {

DiscreteClassModel::DiscreteClassModel(std::vector<Vec> support,
                                       std::vector<double> priors,
                                       std::vector<std::vector<double>> cond)
    : support_(std::move(support)), priors_(std::move(priors)), cond_(std::move(cond)) {
  if (support_.empty() || priors_.empty() || cond_.size() != priors_.size())
    throw std::invalid_argument("discrete model: shape mismatch");
  double psum = 0.0;
  for (double p : priors_) {
    if (p < 0.0) throw std::invalid_argument("discrete model: negative prior");
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-12)
    throw std::invalid_argument("discrete model: priors must sum to 1");
  const std::size_t dim = support_[0].size();
  for (const auto& x : support_)
    if (x.size() != dim) throw std::invalid_argument("discrete model: ragged support");
  for (const auto& row : cond_) {
    if (row.size() != support_.size())
      throw std::invalid_argument("discrete model: conditional row size mismatch");
    double rsum = 0.0;
    for (double p : row) {
      if (p < 0.0) throw std::invalid_argument("discrete model: negative probability");
      rsum += p;
    }
    if (std::abs(rsum - 1.0) > 1e-12)
      throw std::invalid_argument("discrete model: conditional rows must sum to 1");
  }
}

int DiscreteClassModel::support_index(const Vec& x) const {
  for (std::size_t k = 0; k < support_.size(); ++k) {
    bool match = true;
    for (std::size_t d = 0; d < x.size(); ++d)
      if (std::abs(support_[k][d] - x[d]) > 1e-12) { match = false; break; }
    if (match) return static_cast<int>(k);
  }
  return -1;
}

double DiscreteClassModel::class_density(int label, const Vec& x) const {
  int k = support_index(x);
  return k < 0 ? 0.0 : cond_.at(label)[k];
}

Vec DiscreteClassModel::sample_point(int label, Rng& rng) const {
  return support_[rng.categorical(cond_.at(label))];
}

EvalGrid DiscreteClassModel::support_grid() const {
  EvalGrid grid;
  grid.points = support_;
  grid.weights.assign(support_.size(), 1.0);
  grid.density.assign(support_.size(), 1.0);
  return grid;
}

}  // namespace bsim
