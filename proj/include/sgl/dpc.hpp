#pragma once

#include "sgl/core.hpp"
#include "sgl/lambda_bounds.hpp"
#include "sgl/tlfre.hpp"

namespace sgl {

using NnDualBall = DualBall;

/// Dual estimation ball for nonnegative Lasso. At lambda_prev = lambda_max
/// the normal is the argmax column x_*, otherwise y/lambda_prev - theta_prev.
NnDualBall nn_estimation_ball(const DualPoint& theta_prev, double lambda_prev,
                              double lambda_next, const ProblemData& data,
                              double lambda_max, int x_star_index);

/// One-sided feature rule: flag i iff
/// <x_i, center> + radius*||x_i|| < 1 - eps_safe. Returns feature flags only.
/// Degenerate problems (lambda_max <= 0) flag everything.
ScreenResult dpc_screen(const DualPoint& theta_prev, double lambda_prev,
                        double lambda_next, const ProblemData& data,
                        const NnCritical& critical,
                        const ScreenOptions& options = {});

}  // namespace sgl
