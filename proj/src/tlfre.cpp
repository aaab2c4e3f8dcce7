#include "sgl/tlfre.hpp"

#include <cmath>
#include <stdexcept>

#include "sgl/kernels.hpp"

namespace sgl {

int ScreenResult::groups_discarded() const {
  int count = 0;
  for (char flag : group_discarded) count += flag != 0;
  return count;
}

long ScreenResult::features_discarded_l1(const GroupPartition& groups) const {
  long count = 0;
  for (int g = 0; g < static_cast<int>(group_discarded.size()); ++g)
    if (group_discarded[g]) count += groups.group_size(g);
  return count;
}

long ScreenResult::features_discarded_l2() const {
  long count = 0;
  for (char flag : feature_discarded) count += flag != 0;
  return count;
}

DualPoint dual_from_primal(const Vector& beta, const ProblemData& data,
                           double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("dual_from_primal: lambda must be positive");
  return DualPoint{(data.y - data.x * beta) / lambda};
}

namespace {

DualBall ball_from_normal(const Vector& theta_prev, const Vector& normal,
                          const Vector& y, double lambda_next) {
  const double norm_sq = normal.squaredNorm();
  if (norm_sq == 0.0)
    throw std::logic_error("estimation ball: zero normal vector");
  DualBall ball;
  ball.normal = normal;
  const Vector v = y / lambda_next - theta_prev;
  ball.v_perp = v - (v.dot(normal) / norm_sq) * normal;
  ball.radius = 0.5 * ball.v_perp.norm();
  ball.center = theta_prev + 0.5 * ball.v_perp;
  return ball;
}

bool at_lambda_max(double lambda_prev, double lambda_max) {
  return lambda_prev >= lambda_max * (1.0 - 1e-10);
}

}  // namespace

DualBall estimation_ball(const DualPoint& theta_prev, double lambda_prev,
                         double lambda_next, const ProblemData& data,
                         double /*alpha*/, const GroupCritical& critical) {
  if (!(0.0 < lambda_next && lambda_next < lambda_prev))
    throw std::invalid_argument("estimation_ball: need 0 < lambda_next < lambda_prev");
  Vector normal;
  if (at_lambda_max(lambda_prev, critical.lambda_max)) {
    const auto& idx = data.groups.indices(critical.argmax_group);
    const Matrix x_star = gather_columns(data.x, idx);
    normal = x_star * shrink(x_star.transpose() * (data.y / critical.lambda_max), 1.0);
  } else {
    normal = data.y / lambda_prev - theta_prev.theta;
  }
  return ball_from_normal(theta_prev.theta, normal, data.y, lambda_next);
}

double sup_group_shrink(const Vector& c, double r) {
  if (r < 0.0) throw std::invalid_argument("sup_group_shrink: negative radius");
  const double cmax = c.cwiseAbs().maxCoeff();
  if (cmax > 1.0) return shrink(c, 1.0).norm() + r;
  if (cmax == 1.0) return r;
  return std::max(cmax + r - 1.0, 0.0);
}

double sup_feature(const Vector& x_col, const DualBall& ball) {
  return std::abs(x_col.dot(ball.center)) + ball.radius * x_col.norm();
}

ScreenResult screen_with_ball(const Vector& center, double radius_eff,
                              const ProblemData& data, double alpha,
                              const Vector& group_spectral_norms,
                              const ScreenOptions& options) {
  const int p = static_cast<int>(data.x.cols());
  const int num_groups = data.groups.num_groups();
  ScreenResult result;
  result.group_discarded.assign(num_groups, 0);
  result.feature_discarded.assign(p, 0);

  const Vector z = data.x.transpose() * center;
  Vector col_norms;
  if (!options.col_norms) col_norms = data.x.colwise().norm();
  const Vector& norms = options.col_norms ? *options.col_norms : col_norms;

  for (int g = 0; g < num_groups; ++g) {
    const auto& idx = data.groups.indices(g);
    Vector c(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) c[j] = z[idx[j]];
    const double sup = sup_group_shrink(c, radius_eff * group_spectral_norms[g]);
    const double threshold = alpha * data.groups.weight(g);
    const double eps = options.eps_safe_scale * (1.0 + std::abs(threshold));
    if (sup < threshold - eps) {
      result.group_discarded[g] = 1;
      continue;  // feature layer only runs on survivors
    }
    const double eps_f = options.eps_safe_scale * 2.0;
    for (int i : idx) {
      const double sup_t = std::abs(z[i]) + radius_eff * norms[i];
      if (sup_t <= 1.0 - eps_f) result.feature_discarded[i] = 1;
    }
  }
  return result;
}

ScreenResult tlfre_screen(const DualPoint& theta_prev, double lambda_prev,
                          double lambda_next, double alpha,
                          const ProblemData& data, const GroupCritical& critical,
                          const Vector& group_spectral_norms,
                          const ScreenOptions& options) {
  const DualBall ball =
      estimation_ball(theta_prev, lambda_prev, lambda_next, data, alpha, critical);
  double radius = ball.radius;
  if (options.gap_prev > 0.0)
    radius += std::sqrt(2.0 * options.gap_prev) / lambda_next;
  return screen_with_ball(ball.center, radius, data, alpha, group_spectral_norms,
                          options);
}

}  // namespace sgl
