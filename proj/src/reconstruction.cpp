#include "bsim/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bsim {

std::pair<double, double> posterior_pair_from_self_similarity(double s_xx,
                                                              double clamp_tol) {
  if (s_xx < 0.5 - clamp_tol || s_xx > 1.0 + 1e-12)
    throw std::runtime_error("invalid self-similarity");
  s_xx = std::min(std::max(s_xx, 0.5), 1.0);
  double r = 0.5 * std::sqrt(2.0 * s_xx - 1.0);
  return {0.5 + r, 0.5 - r};
}

RegionRelation same_region(double s_xxp, double boundary_tol) {
  if (s_xxp < -1e-12 || s_xxp > 1.0 + 1e-12)
    throw std::invalid_argument("same_region: similarity outside [0,1]");
  if (s_xxp > 0.5 + boundary_tol) return RegionRelation::Same;
  if (s_xxp < 0.5 - boundary_tol) return RegionRelation::Different;
  return RegionRelation::Boundary;
}

std::vector<RegionTag> assign_regions(const EvalGrid& grid, const SimilarityOracle& oracle,
                                      const ReconstructionOptions& opts) {
  const std::size_t n = grid.points.size();
  std::vector<double> margin(n);
  bool any_nonboundary = false;
  for (std::size_t i = 0; i < n; ++i) {
    margin[i] = std::abs(oracle.evaluate(grid.points[i], grid.points[i]) - 0.5);
    if (margin[i] > opts.boundary_tol) any_nonboundary = true;
  }
  if (!any_nonboundary)
    throw std::runtime_error("unidentifiable problem: self-similarity is 1/2 everywhere");

  auto weight_of = [&grid](std::size_t i) {
    double w = grid.weights.empty() ? 1.0 : grid.weights[i];
    if (!grid.density.empty()) w *= grid.density[i];
    return w;
  };
  std::size_t anchor = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (margin[i] <= opts.boundary_tol) continue;
    double score = opts.anchor_policy == AnchorPolicy::WeightedMargin
                       ? margin[i] * weight_of(i)
                       : margin[i] + 1e-15 * weight_of(i);  // weight breaks ties
    if (score > best_score) {
      best_score = score;
      anchor = i;
    }
  }

  std::vector<RegionTag> tags(n, RegionTag::Boundary);
  tags[anchor] = RegionTag::R0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == anchor || margin[i] <= opts.boundary_tol) continue;  // stays Boundary
    auto rel = same_region(oracle.evaluate(grid.points[i], grid.points[anchor]),
                           opts.boundary_tol);
    if (rel == RegionRelation::Boundary) continue;
    tags[i] = rel == RegionRelation::Same ? RegionTag::R0 : RegionTag::R1;
  }

  // Points with a clear self-margin whose relation to the anchor came out
  // ambiguous (possible only under estimation noise; for an exact oracle
  // |s(x,a) - 1/2| = 2 d_x d_a never vanishes when both margins are clear)
  // inherit the tag via their nearest already-tagged point, where the local
  // similarity is far better estimated than the long-range one.
  auto dist2 = [&grid](std::size_t a, std::size_t b) {
    double d = 0.0;
    for (std::size_t k = 0; k < grid.points[a].size(); ++k) {
      double t = grid.points[a][k] - grid.points[b][k];
      d += t * t;
    }
    return d;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (tags[i] != RegionTag::Boundary || margin[i] <= opts.boundary_tol) continue;
      std::size_t nearest = n;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || tags[j] == RegionTag::Boundary) continue;
        double d = dist2(i, j);
        if (d < best_d) {
          best_d = d;
          nearest = j;
        }
      }
      if (nearest == n) break;
      auto rel = same_region(oracle.evaluate(grid.points[i], grid.points[nearest]),
                             opts.boundary_tol);
      if (rel == RegionRelation::Boundary) continue;
      tags[i] = rel == RegionRelation::Same ? tags[nearest]
                : tags[nearest] == RegionTag::R0 ? RegionTag::R1
                                                 : RegionTag::R0;
      changed = true;
    }
  }
  return tags;
}

BranchChoice disambiguate_branch(const std::function<double(const Vec&)>& cand_a,
                                 const std::function<double(const Vec&)>& cand_b,
                                 const std::vector<LabeledSample>& samples) {
  BranchChoice out;
  double log_r = 0.0;
  for (const auto& s : samples) {
    double pa = cand_a(s.point);
    double pb = cand_b(s.point);
    double prob_a = s.label == 0 ? pa : 1.0 - pa;
    double prob_b = s.label == 0 ? pb : 1.0 - pb;
    if (prob_a <= 0.0 && prob_b <= 0.0) continue;  // impossible under both
    if (prob_a <= 0.0) {
      out.choice = Branch::B;
      out.log_ratio = -std::numeric_limits<double>::infinity();
      return out;
    }
    if (prob_b <= 0.0) {
      out.choice = Branch::A;
      out.log_ratio = std::numeric_limits<double>::infinity();
      return out;
    }
    log_r += std::log(prob_a) - std::log(prob_b);
  }
  out.log_ratio = log_r;
  if (log_r > 0.0) {
    out.choice = Branch::A;
  } else if (log_r < 0.0) {
    out.choice = Branch::B;
  } else {
    out.choice = Branch::A;
    out.tie_warning = true;
  }
  return out;
}

int TwoClassReconstruction::nearest_index(const Vec& x) const {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    double d = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      double t = grid.points[i][k] - x[k];
      d += t * t;
    }
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

double TwoClassReconstruction::candidate_at(const Vec& x, Branch which) const {
  int i = nearest_index(x);
  double p;
  switch (region[i]) {
    case RegionTag::R0: p = candidate_pairs[i].first; break;
    case RegionTag::R1: p = candidate_pairs[i].second; break;
    default: p = 0.5; break;
  }
  return which == Branch::A ? p : 1.0 - p;
}

double TwoClassReconstruction::posterior_at(const Vec& x) const {
  if (branch == Branch::Undecided)
    throw std::runtime_error("branch unresolved");
  return posterior[nearest_index(x)];
}

TwoClassReconstruction reconstruct_two_class(const SimilarityOracle& oracle,
                                             const EvalGrid& grid,
                                             const std::vector<LabeledSample>& samples,
                                             const ReconstructionOptions& opts) {
  TwoClassReconstruction rec;
  rec.grid = grid;
  rec.candidate_pairs.reserve(grid.points.size());
  for (const auto& x : grid.points)
    rec.candidate_pairs.push_back(
        posterior_pair_from_self_similarity(oracle.evaluate(x, x), opts.clamp_tol));
  rec.region = assign_regions(grid, oracle, opts);

  if (samples.empty()) return rec;  // both candidates available, branch undecided

  auto cand_a = [&rec](const Vec& x) { return rec.candidate_at(x, Branch::A); };
  auto cand_b = [&rec](const Vec& x) { return rec.candidate_at(x, Branch::B); };
  BranchChoice choice = disambiguate_branch(cand_a, cand_b, samples);
  rec.branch = choice.choice;
  rec.log_ratio = choice.log_ratio;
  rec.tie_warning = choice.tie_warning;

  rec.posterior.resize(grid.points.size());
  for (std::size_t i = 0; i < grid.points.size(); ++i)
    rec.posterior[i] = rec.candidate_at(grid.points[i], rec.branch);
  return rec;
}

// ---------------------------------------------------------------------------
// multi-class

double multiclass_residual(const Eigen::MatrixXd& s, const Eigen::MatrixXd& p) {
  return (p.transpose() * p - s).norm();
}

namespace {

// Euclidean projection onto the probability simplex (sort-based)
void project_simplex_column(Eigen::Ref<Eigen::VectorXd> v) {
  const int c = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + c);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  int rho = 0;
  for (int i = 0; i < c; ++i) {
    cum += u[i];
    double t = (cum - 1.0) / (i + 1);
    if (u[i] - t > 0.0) {
      rho = i + 1;
      theta = t;
    }
  }
  (void)rho;
  for (int i = 0; i < c; ++i) v[i] = std::max(v[i] - theta, 0.0);
}

void project_simplex_columns(Eigen::MatrixXd& p) {
  for (int j = 0; j < p.cols(); ++j) project_simplex_column(p.col(j));
}

// Top-c eigen factorization of S rotated so that the column sums match the
// all-ones vector, i.e. the factor is as close to a stochastic matrix as the
// spectrum allows.
Eigen::MatrixXd spectral_init(const Eigen::MatrixXd& s, int c) {
  const int n = static_cast<int>(s.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  Eigen::MatrixXd b(c, n);
  for (int k = 0; k < c; ++k) {
    int idx = n - 1 - k;  // eigenvalues ascend
    double lam = std::max(eig.eigenvalues()(idx), 0.0);
    b.row(k) = std::sqrt(lam) * eig.eigenvectors().col(idx).transpose();
  }
  // want q with q^T B = 1^T, then an orthogonal map sending q to 1/sqrt(c)*sqrt(c)
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd q = b.transpose().colPivHouseholderQr().solve(ones);
  double qn = q.norm();
  if (qn < 1e-12) return b;
  Eigen::VectorXd v = q / qn;
  Eigen::VectorXd u = Eigen::VectorXd::Constant(c, 1.0 / std::sqrt(double(c)));
  Eigen::VectorXd w = v - u;
  if (w.norm() < 1e-12) return b;
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(c, c) - 2.0 * (w * w.transpose()) / w.squaredNorm();
  return h * b;
}

Eigen::MatrixXd random_rotation(int c, Rng& rng) {
  Eigen::MatrixXd g(c, c);
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  return q;
}

// projected gradient with Barzilai-Borwein step and backtracking
double descend(const Eigen::MatrixXd& s, Eigen::MatrixXd& p, const MulticlassOptions& opts) {
  auto objective = [&s](const Eigen::MatrixXd& m) {
    return (m.transpose() * m - s).squaredNorm();
  };
  double f = objective(p);
  Eigen::MatrixXd grad = 4.0 * p * (p.transpose() * p - s);
  double step = 1e-2;
  Eigen::MatrixXd prev_p, prev_grad;
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (it > 0) {
      Eigen::MatrixXd dp = p - prev_p;
      Eigen::MatrixXd dg = grad - prev_grad;
      double denom = (dp.array() * dg.array()).sum();
      double num = dp.squaredNorm();
      if (denom > 1e-300) step = num / denom;
      step = std::clamp(step, 1e-12, 1e3);
    }
    prev_p = p;
    prev_grad = grad;
    double t = step;
    Eigen::MatrixXd trial;
    double f_trial = f;
    bool improved = false;
    for (int bt = 0; bt < 50; ++bt) {
      trial = p - t * grad;
      project_simplex_columns(trial);
      f_trial = objective(trial);
      if (f_trial < f) {
        improved = true;
        break;
      }
      t *= 0.5;
    }
    if (!improved) break;
    double move = (trial - p).norm() / std::max(t, 1e-300);
    p = trial;
    f = f_trial;
    grad = 4.0 * p * (p.transpose() * p - s);
    if (move <= opts.gradient_tol) break;
  }
  return std::sqrt(f);
}

}  // namespace

MulticlassReconstruction solve_multiclass(const Eigen::MatrixXd& s, int class_count,
                                          const MulticlassOptions& opts) {
  const int n = static_cast<int>(s.rows());
  if (s.cols() != n) throw std::invalid_argument("solve_multiclass: matrix not square");
  if (n < 2 * class_count - 1)
    throw std::invalid_argument("solve_multiclass: need n >= 2c-1 points");
  for (int i = 0; i < n; ++i) {
    if (s(i, i) < 1.0 / class_count - 1e-9)
      throw std::invalid_argument("solve_multiclass: diagonal below 1/c");
    for (int j = 0; j < n; ++j) {
      if (s(i, j) < -1e-12 || s(i, j) > 1.0 + 1e-12)
        throw std::invalid_argument("solve_multiclass: entries outside [0,1]");
      if (std::abs(s(i, j) - s(j, i)) > 1e-9)
        throw std::invalid_argument("solve_multiclass: matrix not symmetric");
    }
  }

  Eigen::MatrixXd init0 = spectral_init(s, class_count);
  MulticlassReconstruction best;
  best.residual = std::numeric_limits<double>::infinity();
  Rng master(opts.seed, 0x6d756c7469ull);
  for (int r = 0; r < opts.restarts; ++r) {
    Eigen::MatrixXd p;
    if (r == 0) {
      p = init0;
    } else if (r % 2 == 1) {
      Rng rng = master.split(r);
      p = random_rotation(class_count, rng) * init0;
    } else {
      Rng rng = master.split(r);
      p.resize(class_count, n);
      for (int i = 0; i < class_count; ++i)
        for (int j = 0; j < n; ++j) p(i, j) = rng.uniform();
    }
    project_simplex_columns(p);
    double res = descend(s, p, opts);
    if (res < best.residual) {
      best.residual = res;
      best.p_matrix = p;
    }
    if (best.residual <= 1e-9) break;
  }
  best.consistent = best.residual <= opts.residual_tol_per_point * n;
  return best;
}

MulticlassReconstruction disambiguate_permutation(MulticlassReconstruction solution,
                                                  const std::vector<int>& labels,
                                                  const std::vector<int>& columns) {
  const int c = static_cast<int>(solution.p_matrix.rows());
  if (c > 6) throw std::runtime_error("permutation search too large");
  if (labels.size() != columns.size())
    throw std::invalid_argument("disambiguate_permutation: labels/columns size mismatch");
  if (labels.empty()) {
    solution.permutation_resolved = false;
    solution.tie_warning = true;
    return solution;
  }
  std::vector<int> perm(c);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best_perm = perm;
  double best_ll = -std::numeric_limits<double>::infinity();
  do {
    double ll = 0.0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      double p = solution.p_matrix(perm[labels[k]], columns[k]);
      if (p <= 0.0) {
        ll = -std::numeric_limits<double>::infinity();
        break;
      }
      ll += std::log(p);
    }
    if (ll > best_ll) {
      best_ll = ll;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  Eigen::MatrixXd relabeled(solution.p_matrix.rows(), solution.p_matrix.cols());
  for (int i = 0; i < c; ++i) relabeled.row(i) = solution.p_matrix.row(best_perm[i]);
  solution.p_matrix = relabeled;
  solution.permutation_resolved = true;
  return solution;
}

}  // namespace bsim
