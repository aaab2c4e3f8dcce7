#include "sgl/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace sgl {

Vector shrink(const Vector& w, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("shrink: gamma must be nonnegative");
  // w - P_{gamma*Binf}(w), so shrink + proj_linf is the identity exactly
  return w.unaryExpr([gamma](double v) {
    return v > gamma ? v - gamma : (v < -gamma ? v + gamma : 0.0);
  });
}

Vector proj_linf(const Vector& w, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("proj_linf: gamma must be positive");
  return w.unaryExpr([gamma](double v) {
    return v > gamma ? gamma : (v < -gamma ? -gamma : v);
  });
}

double sgl_penalty(const Vector& beta, const PenaltyParams& params,
                   const GroupPartition& groups) {
  if (beta.size() != groups.num_features())
    throw std::invalid_argument("sgl_penalty: beta length != p");
  double group_part = 0.0;
  for (int g = 0; g < groups.num_groups(); ++g) {
    double sq = 0.0;
    for (int i : groups.indices(g)) sq += beta[i] * beta[i];
    group_part += groups.weight(g) * std::sqrt(sq);
  }
  return params.lambda * (params.alpha * group_part + beta.lpNorm<1>());
}

Vector prox_sgl_group(const Vector& v, double tau1, double tau2) {
  if (tau1 < 0.0 || tau2 < 0.0)
    throw std::invalid_argument("prox_sgl_group: negative threshold");
  Vector u = shrink(v, tau2);
  const double norm = u.norm();
  if (norm <= tau1) return Vector::Zero(v.size());
  u *= 1.0 - tau1 / norm;
  return u;
}

namespace {

double gram_spectral_norm(const Matrix& block) {
  const Matrix gram = block.transpose() * block;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  const double top = solver.eigenvalues().maxCoeff();
  return top > 0.0 ? std::sqrt(top) : 0.0;
}

double power_spectral_norm(const Matrix& block) {
  const Eigen::Index n = block.cols();
  Vector v = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double sigma_sq = 0.0;
  for (int it = 0; it < 1000; ++it) {
    Vector w = block.transpose() * (block * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double prev = sigma_sq;
    sigma_sq = v.dot(w);
    v = w / norm;
    if (it > 0 && std::abs(sigma_sq - prev) <= 1e-10 * std::abs(sigma_sq)) break;
  }
  return sigma_sq > 0.0 ? std::sqrt(sigma_sq) : 0.0;
}

}  // namespace

double spectral_norm(const Matrix& block) {
  if (block.size() == 0) throw std::invalid_argument("spectral_norm: empty block");
  if (block.cols() <= 8) return gram_spectral_norm(block);
  return power_spectral_norm(block);
}

double spectral_norm_cols(const Matrix& x, const std::vector<int>& cols) {
  return spectral_norm(gather_columns(x, cols));
}

Matrix gather_columns(const Matrix& x, const std::vector<int>& cols) {
  Matrix out(x.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(j) = x.col(cols[j]);
  return out;
}

FeasibilityMargins feasibility_margins(const DualPoint& theta,
                                       const ProblemData& data, double alpha) {
  const Vector z = data.x.transpose() * theta.theta;
  const int num_groups = data.groups.num_groups();
  Vector margins(num_groups);
  for (int g = 0; g < num_groups; ++g) {
    double sq = 0.0;
    for (int i : data.groups.indices(g)) {
      const double m = std::abs(z[i]) - 1.0;
      if (m > 0.0) sq += m * m;
    }
    margins[g] = std::sqrt(sq) - alpha * data.groups.weight(g);
  }
  return FeasibilityMargins{std::move(margins)};
}

}  // namespace sgl
