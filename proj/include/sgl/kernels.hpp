#pragma once

#include "sgl/core.hpp"

namespace sgl {

/// Componentwise soft-thresholding: (|w_i| - gamma)_+ * sgn(w_i).
Vector shrink(const Vector& w, double gamma);

/// Componentwise projection onto the gamma-radius l-inf ball.
Vector proj_linf(const Vector& w, double gamma);

/// lambda * (alpha * sum_g sqrt(n_g) ||beta_g|| + ||beta||_1).
double sgl_penalty(const Vector& beta, const PenaltyParams& params,
                   const GroupPartition& groups);

/// Minimizer of 0.5||v - u||^2 + tau1*||u|| + tau2*||u||_1.
Vector prox_sgl_group(const Vector& v, double tau1, double tau2);

/// Largest singular value of a matrix block. Deterministic: Gram
/// eigendecomposition for <= 8 columns, power iteration (all-ones start,
/// 1e-10 relative stop, 1000 iteration cap) otherwise.
double spectral_norm(const Matrix& block);

/// Spectral norm of the submatrix formed by the listed columns of x.
double spectral_norm_cols(const Matrix& x, const std::vector<int>& cols);

/// Per-group dual feasibility slack: entry g = ||S_1(X_g^T theta)|| - alpha*sqrt(n_g).
struct FeasibilityMargins {
  Vector per_group;

  bool feasible(double tol = 1e-9) const {
    return (per_group.array() <= tol).all();
  }
};

FeasibilityMargins feasibility_margins(const DualPoint& theta,
                                       const ProblemData& data, double alpha);

/// Dense copy of the listed columns of x.
Matrix gather_columns(const Matrix& x, const std::vector<int>& cols);

}  // namespace sgl
