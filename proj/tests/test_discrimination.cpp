#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bsim/discrimination.hpp"

using namespace bsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

double normal_pdf(double x, double mean, double var) {
  return std::exp(-(x - mean) * (x - mean) / (2.0 * var)) / std::sqrt(2.0 * kPi * var);
}

// a single theta carries no information: every pair looks the same
DiscriminationModel singleton_theta_model(double same_prior) {
  DiscriminationModel model;
  model.theta_nodes = {{0.0, 1.0}};
  model.appearance = [](double, double x) { return x == 1.0 || x == 2.0 ? 0.5 : 0.0; };
  model.sample_appearance = [](double, Rng& rng) { return rng.uniform() < 0.5 ? 1.0 : 2.0; };
  model.sample_theta = [](Rng&) { return 0.0; };
  model.same_prior = same_prior;
  model.x_support = {1.0, 2.0};
  return model;
}

std::vector<double> threshold_grid() {
  std::vector<double> t;
  for (int i = 1; i <= 19; ++i) t.push_back(i * 0.05);
  return t;
}

}  // namespace

TEST_CASE("appearance_marginal sums out nuisance variables") {
  auto base = [](double phi, double nu, double x) { return normal_pdf(x, phi + nu, 1.0); };

  // singleton supports reduce to the base density
  auto single = appearance_marginal(base, {{0.3, 1.0}}, {{0.0, 1.0}});
  CHECK(single(0.7) == doctest::Approx(normal_pdf(0.7, 0.3, 1.0)).epsilon(1e-12));

  // two equally likely nuisance shifts +-eps average the two densities
  auto shifted = appearance_marginal(base, {{0.0, 1.0}}, {{-0.4, 0.5}, {0.4, 0.5}});
  double expected = 0.5 * normal_pdf(1.0, -0.4, 1.0) + 0.5 * normal_pdf(1.0, 0.4, 1.0);
  CHECK(shifted(1.0) == doctest::Approx(expected).epsilon(1e-12));

  // the flip-noise appearance table as a phi x nu sum
  auto table = [](double phi, double nu, double x) {
    double mean = phi + nu;
    return x == mean ? 0.9 : (x == 3.0 - mean ? 0.1 : 0.0);
  };
  auto flip = appearance_marginal(table, {{1.0, 0.5}, {2.0, 0.5}}, {{0.0, 1.0}});
  CHECK(flip(1.0) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS(appearance_marginal(base, {}, {{0.0, 1.0}}));
}

TEST_CASE("flip-noise model: pair likelihood hand values") {
  auto model = flip_noise_model();
  // P(1,1|S=1) = 0.5*0.81 + 0.5*0.01 = 0.41; P(1,2|S=1) = 0.09
  CHECK(same_likelihood(model, 1.0, 1.0) == doctest::Approx(0.41).epsilon(1e-12));
  CHECK(same_likelihood(model, 1.0, 2.0) == doctest::Approx(0.09).epsilon(1e-12));
  // P(x=1) = 0.5, so the independent-pair likelihood is 0.25 everywhere
  CHECK(appearance_density(model, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(diff_likelihood(model, 1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(diff_likelihood(model, 2.0, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("flip-noise model: same posterior to four decimals") {
  auto model = flip_noise_model();
  auto agree = same_posterior(model, 1.0, 1.0);
  auto differ = same_posterior(model, 1.0, 2.0);
  CHECK(std::abs(agree.posterior_same - 0.6212) <= 5e-5);
  CHECK(std::abs(differ.posterior_same - 0.2647) <= 5e-5);
  CHECK(agree.posterior_same == doctest::Approx(0.41 / 0.66).epsilon(1e-12));
  CHECK(differ.posterior_same == doctest::Approx(0.09 / 0.34).epsilon(1e-12));
  CHECK(agree.decision);
  CHECK(!differ.decision);
  // the mixture identity behind the posterior
  double p = model.same_prior;
  double bayes = p * agree.same_likelihood /
                 (p * agree.same_likelihood + (1.0 - p) * agree.diff_likelihood);
  CHECK(agree.posterior_same == doctest::Approx(bayes).epsilon(1e-12));
}

TEST_CASE("same_posterior: degenerate priors and impossible pairs") {
  auto certain = flip_noise_model(1.0);
  CHECK(same_posterior(certain, 1.0, 2.0).posterior_same == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(same_posterior(certain, 1.0, 2.0).decision);

  auto model = flip_noise_model();
  CHECK_THROWS_WITH_AS(same_posterior(model, 7.0, 1.0),
                       doctest::Contains("impossible pair"), std::runtime_error);
  DiscriminationModel bad = model;
  bad.same_prior = 1.5;
  CHECK_THROWS_AS(same_posterior(bad, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("same_posterior is symmetric in the pair") {
  auto model = flip_noise_model(0.3);
  for (double x : model.x_support)
    for (double xp : model.x_support)
      CHECK(std::abs(same_posterior(model, x, xp).posterior_same -
                     same_posterior(model, xp, x).posterior_same) <= 1e-12);
}

TEST_CASE("sample_pairs: deterministic, labeled, and prior-consistent") {
  auto model = flip_noise_model(0.3);
  auto a = sample_pairs(model, 21, 2000);
  auto b = sample_pairs(model, 21, 2000);
  REQUIRE(a.size() == 2000);
  long same_count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].xp == b[i].xp);
    CHECK(a[i].same == b[i].same);
    same_count += a[i].same;
  }
  // 3 sigma band around P(S=1) = 0.3 at n = 2000
  CHECK(std::abs(double(same_count) / a.size() - 0.3) <= 3.0 * std::sqrt(0.3 * 0.7 / 2000.0));
}

TEST_CASE("flip-noise model: exact error is minimized at threshold 1/2") {
  auto model = flip_noise_model();
  double at_half = exact_threshold_error(model, 0.5);
  CHECK(at_half == doctest::Approx(0.34).epsilon(1e-12));
  for (double t : threshold_grid()) CHECK(exact_threshold_error(model, t) >= at_half - 1e-12);
  // outside the posterior band {0.2647, 0.6212} every decision collapses
  CHECK(exact_threshold_error(model, 0.1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(exact_threshold_error(model, 0.9) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("optimality_check on the flip-noise model: exact and empirical agree") {
  auto model = flip_noise_model();
  auto sweep = optimality_check(model, threshold_grid(), 100000, 6);
  REQUIRE(sweep.exact_error.size() == sweep.thresholds.size());
  REQUIRE(sweep.empirical_error.size() == sweep.thresholds.size());
  CHECK(sweep.exact_min_index >= 0);
  CHECK(sweep.exact_error[sweep.exact_min_index] == doctest::Approx(0.34).epsilon(1e-12));
  // t = 1/2 attains the exact minimum
  CHECK(sweep.exact_error[9] == doctest::Approx(0.34).epsilon(1e-12));
  for (std::size_t i = 0; i < sweep.thresholds.size(); ++i) {
    CHECK(std::abs(sweep.empirical_error[i] - sweep.exact_error[i]) <=
          4.0 * sweep.stderr_value[i] + 1e-9);
    CHECK(sweep.stderr_value[i] <= 0.002);
  }
  CHECK_THROWS(optimality_check(model, {}, 100, 1));
}

TEST_CASE("singleton theta: the pair carries no evidence") {
  auto model = singleton_theta_model(0.3);
  for (double x : model.x_support)
    for (double xp : model.x_support)
      CHECK(same_posterior(model, x, xp).posterior_same ==
            doctest::Approx(0.3).epsilon(1e-12));
  // the best achievable error is min(P(S=1), P(S=0)) at any threshold
  CHECK(exact_threshold_error(model, 0.5) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(exact_threshold_error(singleton_theta_model(0.7), 0.5) ==
        doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("Gaussian theta model: empirical optimum sits near threshold 1/2") {
  auto model = gaussian_theta_model();
  CHECK(model.x_support.empty());  // continuous: no exact enumeration
  auto grid = threshold_grid();
  auto sweep = optimality_check(model, grid, 100000, 17);
  CHECK(sweep.exact_error.empty());
  CHECK(sweep.exact_min_index == -1);
  // index 9 is t = 0.5; the empirical minimum must be within two grid steps
  CHECK(std::abs(sweep.empirical_min_index - 9) <= 2);
  // and the curve at 0.5 beats the always-same / always-different extremes
  CHECK(sweep.empirical_error[9] < sweep.empirical_error.front() - 0.01);
  CHECK(sweep.empirical_error[9] < sweep.empirical_error.back() - 0.01);
}

TEST_CASE("Bayes rule beats fixed competitor rules on the flip-noise model") {
  auto model = flip_noise_model();
  double bayes = exact_threshold_error(model, 0.5);

  // competitor 1: declare same iff x == x'.  On this model it reproduces the
  // Bayes decisions exactly, so its error ties at 0.34.
  double match_rule = 0.5 * (2.0 * 0.09) + 0.5 * (0.25 + 0.25);
  CHECK(bayes == doctest::Approx(match_rule).epsilon(1e-12));

  // competitors 2 and 3: constant rules err with probability 1/2
  CHECK(bayes <= 0.5 + 1e-12);
  CHECK(exact_threshold_error(model, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(exact_threshold_error(model, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  auto rule = gauss_legendre(5, -1.0, 1.0);
  double total = 0.0, quad = 0.0;
  for (const auto& node : rule) {
    total += node.weight;
    quad += node.weight * node.value * node.value;
  }
  CHECK(total == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(quad == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  auto shifted = gauss_legendre(8, 0.0, 2.0);
  double cubic = 0.0;
  for (const auto& node : shifted) cubic += node.weight * std::pow(node.value, 3);
  CHECK(cubic == doctest::Approx(4.0).epsilon(1e-10));

  CHECK_THROWS(gauss_legendre(0, -1.0, 1.0));
}
