#pragma once

#include "sgl/core.hpp"

namespace sgl {

struct SolveConfig {
  double tol_gap = 1e-8;  // relative duality gap target
  int max_iter = 200000;
  const Vector* warm_start = nullptr;             // full-length beta
  const std::vector<char>* active_mask = nullptr; // surviving features; null = all
  double spectral_norm_hint = 0.0;                // ||X_masked||_2 if already known
  int gap_check_every = 10;
};

struct KktReport {
  double stationarity_residual = 0.0;
  double feasibility_residual = 0.0;
  double gap = 0.0;
};

/// FISTA with adaptive restart on the SGL objective
/// 0.5||y - X beta||^2 + lambda(alpha sum_g sqrt(n_g)||beta_g|| + ||beta||_1).
/// Convergence is certified by the relative duality gap; masked features are
/// fixed at zero.
PrimalSolution solve_sgl(const ProblemData& data, const PenaltyParams& params,
                         const SolveConfig& config = {});

/// Same scheme for 0.5||y - X beta||^2 + lambda||beta||_1 over beta >= 0.
PrimalSolution solve_nnlasso(const ProblemData& data, double lambda,
                             const SolveConfig& config = {});

/// Primal objective minus the dual objective at the scaled-feasible point
/// theta = s(y - X beta)/lambda, s the largest scalar in (0, 1] keeping all
/// group margins nonpositive (bisection).
double duality_gap_sgl(const Vector& beta, const ProblemData& data,
                       const PenaltyParams& params);

double duality_gap_nnlasso(const Vector& beta, const ProblemData& data,
                           double lambda);

KktReport kkt_check_sgl(const Vector& beta, const ProblemData& data,
                        const PenaltyParams& params);

KktReport kkt_check_nnlasso(const Vector& beta, const ProblemData& data,
                            double lambda);

}  // namespace sgl
