#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "bsim/discrete.hpp"
#include "bsim/experiments.hpp"
#include "bsim/generative.hpp"
#include "bsim/reconstruction.hpp"
#include "bsim/similarity.hpp"

using namespace bsim;

namespace {

std::shared_ptr<DiscreteClassModel> disjoint_discrete() {
  return std::make_shared<DiscreteClassModel>(
      std::vector<Vec>{{0.0}, {1.0}, {2.0}, {3.0}}, std::vector<double>{0.5, 0.5},
      std::vector<std::vector<double>>{{0.6, 0.4, 0.0, 0.0}, {0.0, 0.0, 0.3, 0.7}});
}

EvalGrid grid_41_pm4(const MixtureClassModel& model) {
  EvalGrid grid;
  for (int i = 0; i < 41; ++i) {
    Vec x{-4.0 + i * 0.2};
    grid.density.push_back(model.marginal_density(x));
    grid.points.push_back(std::move(x));
    grid.weights.push_back(0.2);
  }
  return grid;
}

Eigen::MatrixXd forward_similarity(const Eigen::MatrixXd& p) {
  return p.transpose() * p;
}

}  // namespace

TEST_CASE("posterior_pair_from_self_similarity hand values") {
  auto pure = posterior_pair_from_self_similarity(1.0);
  CHECK(pure.first == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pure.second == doctest::Approx(0.0).epsilon(1e-12));

  auto mid = posterior_pair_from_self_similarity(0.5);
  CHECK(mid.first == doctest::Approx(0.5).epsilon(1e-12));

  auto pair = posterior_pair_from_self_similarity(0.68);  // 0.8^2 + 0.2^2
  CHECK(pair.first == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(pair.second == doctest::Approx(0.2).epsilon(1e-12));

  // forward check and complementarity over a sweep
  for (double s = 0.5; s <= 1.0; s += 0.01) {
    auto [p, q] = posterior_pair_from_self_similarity(s);
    CHECK(std::abs(p + q - 1.0) <= 1e-9);
    CHECK(std::abs(p * p + q * q - s) <= 1e-9);
  }
}

TEST_CASE("posterior_pair_from_self_similarity rejects invalid values") {
  CHECK_THROWS_WITH_AS(posterior_pair_from_self_similarity(0.3),
                       doctest::Contains("invalid self-similarity"), std::runtime_error);
  CHECK_THROWS_WITH_AS(posterior_pair_from_self_similarity(1.1),
                       doctest::Contains("invalid self-similarity"), std::runtime_error);
  // below 1/2 within clamp_tol clamps instead of throwing
  auto clamped = posterior_pair_from_self_similarity(0.4, 0.2);
  CHECK(clamped.first == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("same_region thresholds at 1/2 with a boundary band") {
  CHECK(same_region(0.62, 1e-9) == RegionRelation::Same);
  CHECK(same_region(0.38, 1e-9) == RegionRelation::Different);
  CHECK(same_region(0.5, 1e-9) == RegionRelation::Boundary);
  CHECK(same_region(0.51, 0.02) == RegionRelation::Boundary);
}

TEST_CASE("assign_regions recovers the true partition of a disjoint model") {
  auto model = disjoint_discrete();
  auto oracle = exact_similarity(model);
  auto grid = model->support_grid();
  auto tags = assign_regions(grid, oracle);
  REQUIRE(tags.size() == 4);
  CHECK(tags[0] == tags[1]);
  CHECK(tags[2] == tags[3]);
  CHECK(tags[0] != tags[2]);
}

TEST_CASE("assign_regions: single-point grid is the anchor") {
  auto model = disjoint_discrete();
  auto oracle = exact_similarity(model);
  EvalGrid grid;
  grid.points = {{0.0}};
  grid.weights = {1.0};
  auto tags = assign_regions(grid, oracle);
  REQUIRE(tags.size() == 1);
  CHECK(tags[0] == RegionTag::R0);
}

TEST_CASE("assign_regions: identical conditionals are unidentifiable") {
  auto model = std::make_shared<MixtureClassModel>(
      std::vector<double>{0.5, 0.5},
      std::vector<std::vector<GaussianComponent>>{{{1.0, {0.0}, {1.0}}},
                                                  {{1.0, {0.0}, {1.0}}}});
  auto oracle = exact_similarity(model);
  auto grid = make_grid(*model, 11);
  CHECK_THROWS_WITH_AS(assign_regions(grid, oracle),
                       doctest::Contains("unidentifiable problem"), std::runtime_error);
}

TEST_CASE("region predicate agrees with the posterior sign product (exhaustive)") {
  auto model = disjoint_discrete();
  auto oracle = exact_similarity(model);
  const auto& support = model->support();
  for (const auto& x : support)
    for (const auto& y : support) {
      double px = model->class_posterior(x)[0] - 0.5;
      double py = model->class_posterior(y)[0] - 0.5;
      if (std::abs(px) <= 1e-9 || std::abs(py) <= 1e-9) continue;
      auto rel = same_region(oracle.evaluate(x, y), 1e-9);
      CHECK(rel == (px * py > 0 ? RegionRelation::Same : RegionRelation::Different));
    }
}

TEST_CASE("disambiguate_branch: empty sample list ties toward A") {
  auto choice = disambiguate_branch([](const Vec&) { return 0.9; },
                                    [](const Vec&) { return 0.1; }, {});
  CHECK(choice.choice == Branch::A);
  CHECK(choice.log_ratio == 0.0);
  CHECK(choice.tie_warning);
}

TEST_CASE("disambiguate_branch: single sample gives log 9") {
  std::vector<LabeledSample> samples = {{0, {0.0}}};
  auto choice = disambiguate_branch([](const Vec&) { return 0.9; },
                                    [](const Vec&) { return 0.1; }, samples);
  CHECK(choice.choice == Branch::A);
  CHECK(choice.log_ratio == doctest::Approx(std::log(9.0)).epsilon(1e-12));
  CHECK(!choice.tie_warning);
}

TEST_CASE("disambiguate_branch: zero-probability candidate is eliminated") {
  std::vector<LabeledSample> samples = {{0, {0.0}}};
  auto choice = disambiguate_branch([](const Vec&) { return 0.0; },
                                    [](const Vec&) { return 0.5; }, samples);
  CHECK(choice.choice == Branch::B);
  CHECK(std::isinf(choice.log_ratio));
}

TEST_CASE("disambiguate_branch: 100 samples pick the true field over its flip") {
  auto model = gauss_pm1_model();
  auto samples = model.sample(21, 100);
  auto truth = [&model](const Vec& x) { return model.class_posterior(x)[0]; };
  auto flip = [&truth](const Vec& x) { return 1.0 - truth(x); };
  CHECK(disambiguate_branch(truth, flip, samples).choice == Branch::A);
  CHECK(disambiguate_branch(flip, truth, samples).choice == Branch::B);
}

TEST_CASE("reconstruct_two_class: exact oracle round trip on the +-1 model") {
  auto model = std::make_shared<MixtureClassModel>(gauss_pm1_model());
  auto oracle = exact_similarity(model);
  auto grid = make_grid(*model, 41);
  auto samples = model->sample(7, 200);
  auto rec = reconstruct_two_class(oracle, grid, samples);
  REQUIRE(rec.branch != Branch::Undecided);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.points.size(); ++i)
    err = std::max(err, std::abs(rec.posterior[i] - model->class_posterior(grid.points[i])[0]));
  CHECK(err <= 1e-9);
}

TEST_CASE("reconstruct_two_class: one-class oracle gives posterior 1") {
  SimilarityOracle ones;
  ones.evaluate = [](const Vec&, const Vec&) { return 1.0; };
  ones.dimension = 1;
  EvalGrid grid;
  for (int i = 0; i < 5; ++i) {
    grid.points.push_back({double(i)});
    grid.weights.push_back(1.0);
  }
  std::vector<LabeledSample> samples = {{0, {1.0}}, {0, {3.0}}};
  auto rec = reconstruct_two_class(ones, grid, samples);
  for (double p : rec.posterior) CHECK(p == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reconstruct_two_class: empty samples leave the branch undecided") {
  auto model = std::make_shared<MixtureClassModel>(gauss_pm1_model());
  auto oracle = exact_similarity(model);
  auto grid = make_grid(*model, 21);
  auto rec = reconstruct_two_class(oracle, grid, {});
  CHECK(rec.branch == Branch::Undecided);
  CHECK(rec.candidate_pairs.size() == grid.points.size());
  CHECK_THROWS_WITH_AS(rec.posterior_at({0.5}), doctest::Contains("branch unresolved"),
                       std::runtime_error);
  // both candidate fields remain queryable
  double a = rec.candidate_at({-1.0}, Branch::A);
  double b = rec.candidate_at({-1.0}, Branch::B);
  CHECK(a == doctest::Approx(1.0 - b).epsilon(1e-9));
}

TEST_CASE("reconstruct_two_class: estimated oracle error stays below 0.08") {
  auto model = std::make_shared<MixtureClassModel>(gauss_pm1_model());
  auto samples = model->sample(1, 20000);
  std::vector<LabeledPair> pairs;
  for (int i = 0; i < 10000; ++i)
    pairs.push_back({samples[2 * i].point, samples[2 * i + 1].point,
                     samples[2 * i].label == samples[2 * i + 1].label});
  auto est = estimate_similarity(pairs, 0.3);

  ReconstructionOptions opts;
  opts.boundary_tol = 0.01;
  opts.clamp_tol = 1.0;
  opts.anchor_policy = AnchorPolicy::WeightedMargin;
  auto grid = grid_41_pm4(*model);
  auto train = model->sample(7, 200);
  auto rec = reconstruct_two_class(est, grid, train, opts);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.points.size(); ++i)
    err = std::max(err, std::abs(rec.posterior[i] - model->class_posterior(grid.points[i])[0]));
  CHECK(err <= 0.08);

  // the exact oracle passes the much tighter bound on the very same grid
  auto exact = exact_similarity(model);
  auto rec_exact = reconstruct_two_class(exact, grid, train);
  double err_exact = 0.0;
  for (std::size_t i = 0; i < grid.points.size(); ++i)
    err_exact = std::max(err_exact,
                         std::abs(rec_exact.posterior[i] - model->class_posterior(grid.points[i])[0]));
  CHECK(err_exact <= 1e-9);
}

TEST_CASE("round trip property on random two-class models") {
  for (std::uint64_t seed = 30; seed < 35; ++seed) {
    auto model = random_two_class_model(seed);
    auto result = round_trip(model, 41, 200, seed);
    CHECK(result.max_error <= 1e-9);
    CHECK(result.branch_correct);
  }
}

TEST_CASE("flip symmetry: globally flipped labels give the complementary branch") {
  auto model = std::make_shared<MixtureClassModel>(gauss_pm1_model());
  auto oracle = exact_similarity(model);
  auto grid = make_grid(*model, 41);
  auto samples = model->sample(13, 200);
  auto flipped = samples;
  for (auto& s : flipped) s.label = 1 - s.label;
  auto rec = reconstruct_two_class(oracle, grid, samples);
  auto rec_flipped = reconstruct_two_class(oracle, grid, flipped);
  for (std::size_t i = 0; i < grid.points.size(); ++i)
    CHECK(rec.posterior[i] == doctest::Approx(1.0 - rec_flipped.posterior[i]).epsilon(1e-9));
}

TEST_CASE("solve_multiclass: c=2 hand instance recovered up to permutation") {
  Eigen::MatrixXd p(2, 3);
  p << 0.8, 0.3, 0.5,
       0.2, 0.7, 0.5;
  auto s = forward_similarity(p);
  auto sol = solve_multiclass(s, 2);
  CHECK(sol.residual <= 1e-6);
  CHECK(sol.consistent);
  double direct = (sol.p_matrix - p).cwiseAbs().maxCoeff();
  Eigen::MatrixXd swapped(2, 3);
  swapped << p.row(1), p.row(0);
  double flipped = (sol.p_matrix - swapped).cwiseAbs().maxCoeff();
  CHECK(std::min(direct, flipped) <= 1e-4);
}

TEST_CASE("solve_multiclass: uniform columns are a fixed point") {
  int c = 3, n = 5;
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(n, n, 1.0 / c);
  auto sol = solve_multiclass(s, c);
  CHECK(sol.residual <= 1e-9);
  CHECK((sol.p_matrix.array() - 1.0 / c).abs().maxCoeff() <= 1e-5);
}

TEST_CASE("solve_multiclass: c=3 n=7 instance with pure columns") {
  // one pure column per class keeps the instance identifiable up to permutation
  Eigen::MatrixXd p(3, 7);
  p << 1.0, 0.0, 0.0, 0.2, 0.5, 0.1, 0.3,
       0.0, 1.0, 0.0, 0.3, 0.2, 0.6, 0.4,
       0.0, 0.0, 1.0, 0.5, 0.3, 0.3, 0.3;
  auto s = forward_similarity(p);
  auto sol = solve_multiclass(s, 3);
  CHECK(sol.residual <= 1e-6);
  // forward-inverse consistency: reapplying the Gram map reproduces s
  CHECK((forward_similarity(sol.p_matrix) - s).norm() <= sol.residual + 1e-9);
  // resolve the permutation with one pure sample per class
  auto resolved = disambiguate_permutation(sol, {0, 1, 2}, {0, 1, 2});
  CHECK(resolved.permutation_resolved);
  CHECK((resolved.p_matrix - p).cwiseAbs().maxCoeff() <= 1e-4);
  // columns stay on the simplex
  for (int j = 0; j < 7; ++j)
    CHECK(resolved.p_matrix.col(j).sum() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("solve_multiclass validates its preconditions") {
  Eigen::MatrixXd tiny = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS(solve_multiclass(tiny, 2));  // n < 2c-1
  Eigen::MatrixXd asym = Eigen::MatrixXd::Constant(3, 3, 0.6);
  asym(0, 1) = 0.9;
  CHECK_THROWS(solve_multiclass(asym, 2));
  Eigen::MatrixXd low_diag = Eigen::MatrixXd::Constant(3, 3, 0.4);
  CHECK_THROWS(solve_multiclass(low_diag, 2));  // diagonal below 1/c
}

TEST_CASE("solve_multiclass flags infeasible similarity matrices") {
  // three mutually orthogonal pure points cannot exist with only two classes
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(3, 3);
  auto sol = solve_multiclass(s, 2);
  CHECK(!sol.consistent);
  CHECK(sol.residual > 1e-4 * 3);
}

TEST_CASE("disambiguate_permutation edge cases") {
  Eigen::MatrixXd p(2, 3);
  p << 0.8, 0.3, 0.5,
       0.2, 0.7, 0.5;
  MulticlassReconstruction sol;
  sol.p_matrix = p;

  // no samples -> unchanged with a warning
  auto unresolved = disambiguate_permutation(sol, {}, {});
  CHECK(!unresolved.permutation_resolved);
  CHECK(unresolved.tie_warning);

  // c=2 reduces to the branch rule: a class-1 sample on column 0 flips rows
  auto flipped = disambiguate_permutation(sol, {1}, {0});
  CHECK(flipped.permutation_resolved);
  CHECK(flipped.p_matrix(1, 0) == doctest::Approx(0.8).epsilon(1e-12));

  // c > 6 is out of scope
  MulticlassReconstruction big;
  big.p_matrix = Eigen::MatrixXd::Constant(7, 13, 1.0 / 7);
  CHECK_THROWS_WITH_AS(disambiguate_permutation(big, {0}, {0}),
                       doctest::Contains("permutation search too large"), std::runtime_error);
}
