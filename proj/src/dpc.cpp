#include "sgl/dpc.hpp"

#include <cmath>
#include <stdexcept>

namespace sgl {

NnDualBall nn_estimation_ball(const DualPoint& theta_prev, double lambda_prev,
                              double lambda_next, const ProblemData& data,
                              double lambda_max, int x_star_index) {
  if (!(0.0 < lambda_next && lambda_next < lambda_prev))
    throw std::invalid_argument("nn_estimation_ball: need 0 < lambda_next < lambda_prev");
  if (lambda_max <= 0.0)
    throw std::invalid_argument("nn_estimation_ball: degenerate lambda_max");
  Vector normal;
  if (lambda_prev >= lambda_max * (1.0 - 1e-10)) {
    normal = data.x.col(x_star_index);
  } else {
    normal = data.y / lambda_prev - theta_prev.theta;
  }
  const double norm_sq = normal.squaredNorm();
  if (norm_sq == 0.0) throw std::logic_error("nn_estimation_ball: zero normal");
  NnDualBall ball;
  ball.normal = normal;
  const Vector v = data.y / lambda_next - theta_prev.theta;
  ball.v_perp = v - (v.dot(normal) / norm_sq) * normal;
  ball.radius = 0.5 * ball.v_perp.norm();
  ball.center = theta_prev.theta + 0.5 * ball.v_perp;
  return ball;
}

ScreenResult dpc_screen(const DualPoint& theta_prev, double lambda_prev,
                        double lambda_next, const ProblemData& data,
                        const NnCritical& critical, const ScreenOptions& options) {
  const int p = static_cast<int>(data.x.cols());
  ScreenResult result;
  result.feature_discarded.assign(p, 0);
  if (critical.degenerate) {
    // beta = 0 for every lambda > 0; everything is inactive.
    std::fill(result.feature_discarded.begin(), result.feature_discarded.end(), 1);
    return result;
  }
  const NnDualBall ball =
      nn_estimation_ball(theta_prev, lambda_prev, lambda_next, data,
                         critical.lambda_max, critical.argmax_col);
  double radius = ball.radius;
  if (options.gap_prev > 0.0)
    radius += std::sqrt(2.0 * options.gap_prev) / lambda_next;

  const Vector z = data.x.transpose() * ball.center;
  Vector col_norms;
  if (!options.col_norms) col_norms = data.x.colwise().norm();
  const Vector& norms = options.col_norms ? *options.col_norms : col_norms;

  const double eps = options.eps_safe_scale * 2.0;
  for (int i = 0; i < p; ++i) {
    if (z[i] + radius * norms[i] < 1.0 - eps) result.feature_discarded[i] = 1;
  }
  return result;
}

}  // namespace sgl
