#pragma once

#include "sgl/core.hpp"
#include "sgl/lambda_bounds.hpp"

namespace sgl {

/// Ball known to contain the dual optimum at the next path point:
/// center o = theta_prev + v_perp/2, radius = ||v_perp||/2.
struct DualBall {
  Vector center;
  double radius = 0.0;
  Vector normal;
  Vector v_perp;
};

struct ScreenResult {
  std::vector<char> group_discarded;    // length G; empty for feature-only rules
  std::vector<char> feature_discarded;  // length p; set only in surviving groups

  int groups_discarded() const;
  long features_discarded_l1(const GroupPartition& groups) const;
  long features_discarded_l2() const;

  /// True when feature i is removed by either layer.
  bool removed(int i, const GroupPartition& groups) const {
    if (!group_discarded.empty() && group_discarded[groups.assignment()[i]]) return true;
    return feature_discarded[i] != 0;
  }
};

struct ScreenOptions {
  double eps_safe_scale = 1e-9;  // slack = eps_safe_scale * (1 + |threshold|)
  double gap_prev = 0.0;         // certified duality gap of theta_prev's solve
  const Vector* col_norms = nullptr;  // per-column ||x_i||, computed if absent
};

/// theta = (y - X beta) / lambda.
DualPoint dual_from_primal(const Vector& beta, const ProblemData& data,
                           double lambda);

/// Dual estimation ball for SGL. theta_prev must be the dual optimum at
/// lambda_prev; requires 0 < lambda_next < lambda_prev <= lambda_max.
DualBall estimation_ball(const DualPoint& theta_prev, double lambda_prev,
                         double lambda_next, const ProblemData& data,
                         double alpha, const GroupCritical& critical);

/// sup of ||S_1(xi)|| over the ball ||xi - c|| <= r; closed form with the
/// three cases split on ||c||_inf vs 1.
double sup_group_shrink(const Vector& c, double r);

/// sup of |<x_col, theta>| over the ball.
double sup_feature(const Vector& x_col, const DualBall& ball);

/// Group-layer and feature-layer tests against the given ball (with any
/// gap inflation already applied to `radius_eff`).
ScreenResult screen_with_ball(const Vector& center, double radius_eff,
                              const ProblemData& data, double alpha,
                              const Vector& group_spectral_norms,
                              const ScreenOptions& options = {});

/// Full sequential step: build the estimation ball from the certified
/// solution at lambda_prev, inflate by sqrt(2*gap)/lambda_next, apply the
/// group rule, then the feature rule to survivors.
ScreenResult tlfre_screen(const DualPoint& theta_prev, double lambda_prev,
                          double lambda_next, double alpha,
                          const ProblemData& data,
                          const GroupCritical& critical,
                          const Vector& group_spectral_norms,
                          const ScreenOptions& options = {});

}  // namespace sgl
