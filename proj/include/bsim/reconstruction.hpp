#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "bsim/generative.hpp"
#include "bsim/similarity.hpp"

namespace bsim {

enum class RegionTag { R0, R1, Boundary };
enum class Branch { A, B, Undecided };
enum class RegionRelation { Same, Different, Boundary };

// MaxMargin: anchor = argmax |s(x,x) - 1/2| (ties -> larger grid weight).
// WeightedMargin: anchor = argmax |s(x,x) - 1/2| * weight; under a noisy
// estimated oracle this keeps the anchor inside the data-supported region,
// where its cross-similarities are actually trustworthy.
enum class AnchorPolicy { MaxMargin, WeightedMargin };

struct ReconstructionOptions {
  double clamp_tol = 1e-6;    // tolerated self-similarity below 1/2 (estimation noise)
  double boundary_tol = 1e-9; // use ~0.02 for estimated oracles
  AnchorPolicy anchor_policy = AnchorPolicy::MaxMargin;
};

// Recovered two-class posterior field over a grid.
struct TwoClassReconstruction {
  EvalGrid grid;
  std::vector<std::pair<double, double>> candidate_pairs;  // {p_plus, p_minus}
  std::vector<RegionTag> region;
  Branch branch = Branch::Undecided;
  Vec posterior;  // P(w=0|x) per grid point once branch is chosen
  double log_ratio = 0.0;
  bool tie_warning = false;

  // branch-A / branch-B posterior for P(w=0|x) at the nearest grid point
  double candidate_at(const Vec& x, Branch which) const;
  double posterior_at(const Vec& x) const;
  int nearest_index(const Vec& x) const;
};

// invert s(x,x) = p^2 + (1-p)^2 -> {1/2 + r, 1/2 - r}, r = sqrt(2 s - 1)/2
std::pair<double, double> posterior_pair_from_self_similarity(double s_xx,
                                                              double clamp_tol = 1e-6);

// s(x,x') > 1/2 iff x and x' lie in the same decision region
RegionRelation same_region(double s_xxp, double boundary_tol);

// Anchor (per anchor_policy) is tagged R0; every other non-boundary point gets
// the tag implied by same_region against the anchor.
std::vector<RegionTag> assign_regions(const EvalGrid& grid, const SimilarityOracle& oracle,
                                      const ReconstructionOptions& opts = {});

struct BranchChoice {
  Branch choice = Branch::A;
  double log_ratio = 0.0;
  bool tie_warning = false;
};

// log r = sum_i [log P_A(w_i|x_i) - log P_B(w_i|x_i)]; ties go to A with a warning
BranchChoice disambiguate_branch(const std::function<double(const Vec&)>& cand_a,
                                 const std::function<double(const Vec&)>& cand_b,
                                 const std::vector<LabeledSample>& samples);

TwoClassReconstruction reconstruct_two_class(const SimilarityOracle& oracle,
                                             const EvalGrid& grid,
                                             const std::vector<LabeledSample>& samples,
                                             const ReconstructionOptions& opts = {});

// Multi-class: recover the c x n posterior-column matrix from s_ij = p_i . p_j.
struct MulticlassReconstruction {
  Eigen::MatrixXd p_matrix;  // c x n, columns on the simplex
  double residual = 0.0;     // Frobenius mismatch against the similarity matrix
  bool permutation_resolved = false;
  bool consistent = true;    // residual within residual_tol; diagnostic only
  bool tie_warning = false;
};

struct MulticlassOptions {
  int restarts = 20;
  int max_iterations = 10000;
  double gradient_tol = 1e-10;
  double residual_tol_per_point = 1e-4;  // residual_tol = this * n
  std::uint64_t seed = 0;
};

// Projected-gradient descent on ||P^T P - S||_F^2 with simplex columns,
// started from an eigendecomposition-based factorization rotated toward the
// simplex; best of `restarts` runs.
MulticlassReconstruction solve_multiclass(const Eigen::MatrixXd& s, int class_count,
                                          const MulticlassOptions& opts = {});

// residual of a candidate p against s
double multiclass_residual(const Eigen::MatrixXd& s, const Eigen::MatrixXd& p);

// Pick the row permutation maximizing the sample likelihood; labels[k] is the
// class of sample k, columns[k] the grid column it sits on.  c <= 6 enforced.
MulticlassReconstruction disambiguate_permutation(MulticlassReconstruction solution,
                                                  const std::vector<int>& labels,
                                                  const std::vector<int>& columns);

}  // namespace bsim
