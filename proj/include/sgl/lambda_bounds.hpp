#pragma once

#include "sgl/core.hpp"

namespace sgl {

/// Per-group critical values rho_g and their maximum, the smallest lambda
/// with an all-zero SGL solution at the given alpha.
struct GroupCritical {
  Vector rho;              // rho_g; 0 for groups with X_g^T y = 0
  int argmax_group = -1;   // lowest index attaining lambda_max
  double lambda_max = 0.0;
  bool degenerate = false; // X^T y = 0: every lambda > 0 gives beta = 0
};

/// The unique rho > 0 with ||S_1(z_raw / rho)|| = alpha * sqrt(n), found by
/// breakpoint scan plus a piecewise-quadratic root. Throws on z_raw = 0.
double rho_for_group(const Vector& z_raw, double alpha);

GroupCritical lambda_max_sgl(const ProblemData& data, double alpha);

/// max_g ||S_{lambda2}(X_g^T y)|| / sqrt(n_g); the smallest lambda1 giving a
/// zero solution of the (lambda1, lambda2) formulation.
double lambda1_max_curve(const ProblemData& data, double lambda2);

/// lambda1_max_curve at lambda2 = 0.
double lambda1_max(const ProblemData& data);

/// ||X^T y||_inf.
double lambda2_max(const ProblemData& data);

/// Critical value for nonnegative Lasso: max_i <x_i, y> (signed).
struct NnCritical {
  double lambda_max = 0.0;
  int argmax_col = -1;
  bool degenerate = false;  // lambda_max <= 0: beta = 0 for every lambda > 0
};

NnCritical lambda_max_nonneg(const ProblemData& data);

}  // namespace sgl
