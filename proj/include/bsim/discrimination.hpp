#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bsim/rng.hpp"

namespace bsim {

struct WeightedValue {
  double value;
  double weight;
};

// Same/different task with no latent class structure: a prior over patch
// parameters theta, an appearance density P(x|theta) (scalar features), and
// a prior P(S=1) that two observations share one theta.
struct DiscriminationModel {
  std::vector<WeightedValue> theta_nodes;  // discrete prior or quadrature rule, weights sum to 1
  std::function<double(double theta, double x)> appearance;
  std::function<double(double theta, Rng&)> sample_appearance;
  std::function<double(Rng&)> sample_theta;
  double same_prior = 0.5;
  std::vector<double> x_support;  // nonempty => exact enumeration available
};

struct PairScore {
  double same_likelihood = 0.0;
  double diff_likelihood = 0.0;
  double posterior_same = 0.0;
  bool decision = false;
};

// P(x|theta) = sum_phi sum_nu P(x|theta,phi,nu) P(phi) P(nu)
std::function<double(double)> appearance_marginal(
    const std::function<double(double phi, double nu, double x)>& base,
    const std::vector<WeightedValue>& phi_support,
    const std::vector<WeightedValue>& nu_support);

// P(x) = sum_theta P(x|theta) P(theta)
double appearance_density(const DiscriminationModel& model, double x);

// P(x,x'|S=1) = sum_theta P(x|theta) P(x'|theta) P(theta)
double same_likelihood(const DiscriminationModel& model, double x, double xp);

// P(x,x'|S=0) = P(x) P(x')
double diff_likelihood(const DiscriminationModel& model, double x, double xp);

// Bayes rule on the mixture; decision by threshold (default 1/2, symmetric loss)
PairScore same_posterior(const DiscriminationModel& model, double x, double xp,
                         double threshold = 0.5);

struct LabeledDiscriminationPair {
  double x;
  double xp;
  bool same;
};

// draw S, then theta(s), then appearances
std::vector<LabeledDiscriminationPair> sample_pairs(const DiscriminationModel& model,
                                                    std::uint64_t seed, int count);

struct ThresholdSweep {
  std::vector<double> thresholds;
  std::vector<double> empirical_error;
  std::vector<double> stderr_value;
  std::vector<double> exact_error;  // empty unless x_support enumeration available
  int empirical_min_index = 0;
  int exact_min_index = -1;
};

// exact error of thresholding posterior_same at t, by enumeration over x_support
double exact_threshold_error(const DiscriminationModel& model, double threshold);

// Monte-Carlo (and, on discrete models, exact) error for every threshold;
// used to verify that t = 1/2 minimizes the error
ThresholdSweep optimality_check(const DiscriminationModel& model,
                                const std::vector<double>& thresholds, int trial_count,
                                std::uint64_t seed);

// theta uniform on {1,2}; x equals theta with prob 0.9, flips with prob 0.1
DiscriminationModel flip_noise_model(double same_prior = 0.5);

// theta ~ N(0, sigma^2) via 201-point Gauss-Legendre on [-6 sigma, 6 sigma];
// x | theta ~ N(theta, noise_var)
DiscriminationModel gaussian_theta_model(double sigma = 1.0, double noise_var = 0.25,
                                         double same_prior = 0.5, int nodes = 201);

// Gauss-Legendre nodes/weights on [a, b]
std::vector<WeightedValue> gauss_legendre(int n, double a, double b);

}  // namespace bsim
