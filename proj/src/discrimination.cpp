#include "bsim/discrimination.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bsim {

std::function<double(double)> appearance_marginal(
    const std::function<double(double phi, double nu, double x)>& base,
    const std::vector<WeightedValue>& phi_support,
    const std::vector<WeightedValue>& nu_support) {
  if (phi_support.empty() || nu_support.empty())
    throw std::invalid_argument("appearance_marginal: empty support");
  return [base, phi_support, nu_support](double x) {
    double total = 0.0;
    for (const auto& phi : phi_support)
      for (const auto& nu : nu_support)
        total += phi.weight * nu.weight * base(phi.value, nu.value, x);
    return total;
  };
}

double appearance_density(const DiscriminationModel& model, double x) {
  double total = 0.0;
  for (const auto& node : model.theta_nodes)
    total += node.weight * model.appearance(node.value, x);
  return total;
}

double same_likelihood(const DiscriminationModel& model, double x, double xp) {
  double total = 0.0;
  for (const auto& node : model.theta_nodes)
    total += node.weight * model.appearance(node.value, x) * model.appearance(node.value, xp);
  return total;
}

double diff_likelihood(const DiscriminationModel& model, double x, double xp) {
  return appearance_density(model, x) * appearance_density(model, xp);
}

PairScore same_posterior(const DiscriminationModel& model, double x, double xp,
                         double threshold) {
  if (model.same_prior < 0.0 || model.same_prior > 1.0)
    throw std::invalid_argument("same_posterior: same_prior outside [0,1]");
  PairScore score;
  score.same_likelihood = same_likelihood(model, x, xp);
  score.diff_likelihood = diff_likelihood(model, x, xp);
  double num = score.same_likelihood * model.same_prior;
  double den = num + score.diff_likelihood * (1.0 - model.same_prior);
  if (den <= 0.0) throw std::runtime_error("impossible pair under model");
  score.posterior_same = num / den;
  score.decision = score.posterior_same >= threshold;
  return score;
}

std::vector<LabeledDiscriminationPair> sample_pairs(const DiscriminationModel& model,
                                                    std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<LabeledDiscriminationPair> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    bool same = rng.uniform() < model.same_prior;
    double theta = model.sample_theta(rng);
    double x = model.sample_appearance(theta, rng);
    double theta2 = same ? theta : model.sample_theta(rng);
    double xp = model.sample_appearance(theta2, rng);
    out.push_back({x, xp, same});
  }
  return out;
}

double exact_threshold_error(const DiscriminationModel& model, double threshold) {
  if (model.x_support.empty())
    throw std::runtime_error("exact_threshold_error: model has no finite support");
  double error = 0.0;
  for (double x : model.x_support)
    for (double xp : model.x_support) {
      PairScore score = same_posterior(model, x, xp, threshold);
      double mass_same = score.same_likelihood * model.same_prior;
      double mass_diff = score.diff_likelihood * (1.0 - model.same_prior);
      error += score.decision ? mass_diff : mass_same;
    }
  return error;
}

ThresholdSweep optimality_check(const DiscriminationModel& model,
                                const std::vector<double>& thresholds, int trial_count,
                                std::uint64_t seed) {
  if (thresholds.empty()) throw std::invalid_argument("optimality_check: empty threshold grid");
  ThresholdSweep sweep;
  sweep.thresholds = thresholds;
  sweep.empirical_error.assign(thresholds.size(), 0.0);
  sweep.stderr_value.assign(thresholds.size(), 0.0);

  auto pairs = sample_pairs(model, seed, trial_count);
  std::vector<long> wrong(thresholds.size(), 0);
  for (const auto& pr : pairs) {
    double p = same_posterior(model, pr.x, pr.xp).posterior_same;
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      bool decide_same = p >= thresholds[t];
      if (decide_same != pr.same) ++wrong[t];
    }
  }
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    double e = trial_count > 0 ? static_cast<double>(wrong[t]) / trial_count : 0.0;
    sweep.empirical_error[t] = e;
    sweep.stderr_value[t] = trial_count > 0 ? std::sqrt(e * (1.0 - e) / trial_count) : 0.0;
    if (e < sweep.empirical_error[sweep.empirical_min_index]) sweep.empirical_min_index = t;
  }

  if (!model.x_support.empty()) {
    sweep.exact_error.resize(thresholds.size());
    sweep.exact_min_index = 0;
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      sweep.exact_error[t] = exact_threshold_error(model, thresholds[t]);
      if (sweep.exact_error[t] < sweep.exact_error[sweep.exact_min_index])
        sweep.exact_min_index = t;
    }
  }
  return sweep;
}

DiscriminationModel flip_noise_model(double same_prior) {
  DiscriminationModel model;
  model.theta_nodes = {{1.0, 0.5}, {2.0, 0.5}};
  model.appearance = [](double theta, double x) {
    if (std::abs(x - 1.0) > 1e-9 && std::abs(x - 2.0) > 1e-9) return 0.0;
    return std::abs(x - theta) < 1e-9 ? 0.9 : 0.1;
  };
  model.sample_appearance = [](double theta, Rng& rng) {
    double other = theta == 1.0 ? 2.0 : 1.0;
    return rng.uniform() < 0.9 ? theta : other;
  };
  model.sample_theta = [](Rng& rng) { return rng.uniform() < 0.5 ? 1.0 : 2.0; };
  model.same_prior = same_prior;
  model.x_support = {1.0, 2.0};
  return model;
}

std::vector<WeightedValue> gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  // Golub-Welsch: eigenvalues of the Jacobi matrix give the nodes on [-1,1]
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k - 1, k) = beta;
    jacobi(k, k - 1) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  std::vector<WeightedValue> out(n);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int k = 0; k < n; ++k) {
    double v0 = eig.eigenvectors()(0, k);
    out[k].value = mid + half * eig.eigenvalues()(k);
    out[k].weight = 2.0 * v0 * v0 * half;
  }
  return out;
}

DiscriminationModel gaussian_theta_model(double sigma, double noise_var, double same_prior,
                                         int nodes) {
  DiscriminationModel model;
  auto rule = gauss_legendre(nodes, -6.0 * sigma, 6.0 * sigma);
  double total = 0.0;
  for (auto& node : rule) {
    double pdf = std::exp(-0.5 * node.value * node.value / (sigma * sigma)) /
                 (sigma * std::sqrt(2.0 * std::numbers::pi));
    node.weight *= pdf;
    total += node.weight;
  }
  for (auto& node : rule) node.weight /= total;  // renormalize the truncated prior
  model.theta_nodes = std::move(rule);
  model.appearance = [noise_var](double theta, double x) {
    double d = x - theta;
    return std::exp(-0.5 * d * d / noise_var) / std::sqrt(2.0 * std::numbers::pi * noise_var);
  };
  double noise_std = std::sqrt(noise_var);
  model.sample_appearance = [noise_std](double theta, Rng& rng) {
    return theta + noise_std * rng.normal();
  };
  model.sample_theta = [sigma](Rng& rng) { return sigma * rng.normal(); };
  model.same_prior = same_prior;
  return model;
}

}  // namespace bsim
