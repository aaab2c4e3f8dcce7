#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Partition of the p features into G nonempty groups. Groups need not be
/// contiguous column ranges; explicit per-group index lists are stored.
class GroupPartition {
 public:
  GroupPartition() = default;

  /// Builds the partition from a per-feature group assignment. If
  /// `num_groups` is negative it is inferred as max(assignment)+1.
  explicit GroupPartition(std::vector<int> assignment, int num_groups = -1);

  int num_features() const { return static_cast<int>(assignment_.size()); }
  int num_groups() const { return static_cast<int>(indices_.size()); }

  const std::vector<int>& assignment() const { return assignment_; }
  const std::vector<int>& indices(int g) const { return indices_[g]; }
  int group_size(int g) const { return static_cast<int>(indices_[g].size()); }

  /// sqrt(n_g), the group-lasso weight.
  double weight(int g) const { return weights_[g]; }

  /// Invariant violations, empty when the partition is well formed.
  std::vector<std::string> violations() const;

 private:
  std::vector<int> assignment_;
  std::vector<std::vector<int>> indices_;
  std::vector<double> weights_;
};

/// The (X, y, groups) triple. Immutable after validation.
struct ProblemData {
  Matrix x;
  Vector y;
  GroupPartition groups;

  Eigen::Index num_samples() const { return x.rows(); }
  Eigen::Index num_features() const { return x.cols(); }
};

/// (lambda, alpha) penalty parameterization; lambda1 = alpha*lambda,
/// lambda2 = lambda.
struct PenaltyParams {
  double lambda = 0.0;
  double alpha = 0.0;

  double lambda1() const { return alpha * lambda; }
  double lambda2() const { return lambda; }

  static PenaltyParams from_lambda12(double lambda1, double lambda2) {
    if (lambda2 <= 0.0) throw std::invalid_argument("lambda2 must be positive");
    return PenaltyParams{lambda2, lambda1 / lambda2};
  }
};

struct PrimalSolution {
  Vector beta;
  double objective = 0.0;
  int iterations = 0;
  double duality_gap = 0.0;
  bool converged = false;
};

struct DualPoint {
  Vector theta;
};

/// Returns every violated invariant of `data`; empty means valid.
std::vector<std::string> problem_errors(const ProblemData& data);

/// Returns `data` unchanged when all invariants hold, otherwise throws
/// std::invalid_argument listing every violation.
const ProblemData& validate_problem(const ProblemData& data);

}  // namespace sgl
