#include "sgl/lambda_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgl/kernels.hpp"

namespace sgl {

namespace {

// ||S_1(z / rho)|| for descending-sorted nonnegative z.
double shrunk_norm_at(const Vector& z, double rho) {
  double sq = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double m = z[i] / rho - 1.0;
    if (m <= 0.0) break;  // sorted: later entries shrink to zero too
    sq += m * m;
  }
  return std::sqrt(sq);
}

}  // namespace

double rho_for_group(const Vector& z_raw, double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("rho_for_group: alpha must be positive");
  const Eigen::Index n = z_raw.size();
  Vector z = z_raw.cwiseAbs();
  std::sort(z.data(), z.data() + n, std::greater<double>());
  if (z[0] == 0.0) throw std::invalid_argument("rho_for_group: z_raw is zero");

  const double target = alpha * std::sqrt(static_cast<double>(n));

  // tau_k = ||S_1(z / z_k)||, nondecreasing in k. Exact hits return the
  // breakpoint itself; ties collapse intervals, which the scan skips.
  Vector tau(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    tau[k] = z[k] > 0.0 ? shrunk_norm_at(z, z[k]) : std::numeric_limits<double>::infinity();
    if (std::abs(tau[k] - target) <= 1e-12 * std::max(1.0, target)) return z[k];
  }

  for (Eigen::Index k = 1; k <= n; ++k) {
    const double tau_hi = k < n ? tau[k] : std::numeric_limits<double>::infinity();
    if (!(tau[k - 1] < target && target < tau_hi)) continue;
    const double lo = k < n ? z[k] : 0.0;  // rho in (z_{k+1}, z_k), 1-based k
    const double hi = z[k - 1];
    if (!(lo < hi)) continue;  // tied breakpoints: empty interval

    double s1 = 0.0, s2 = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      s1 += z[i];
      s2 += z[i] * z[i];
    }
    const double a = static_cast<double>(k) - target * target;
    const double b = -2.0 * s1;
    const double c = s2;
    double root;
    if (std::abs(a) <= 1e-14 * std::max(1.0, target * target)) {
      root = c / (2.0 * s1);
    } else {
      const double disc = b * b - 4.0 * a * c;
      if (disc < 0.0) throw std::logic_error("rho_for_group: negative discriminant");
      const double sq = std::sqrt(disc);
      // stable pair of roots
      const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
      const double r1 = q / a;
      const double r2 = c / q;
      const double pad = 1e-9 * hi;
      const bool in1 = r1 >= lo - pad && r1 <= hi + pad;
      const bool in2 = r2 >= lo - pad && r2 <= hi + pad;
      if (in1 && in2) {
        root = std::abs(shrunk_norm_at(z, r1) - target) <=
                       std::abs(shrunk_norm_at(z, r2) - target)
                   ? r1
                   : r2;
      } else if (in1) {
        root = r1;
      } else if (in2) {
        root = r2;
      } else {
        continue;
      }
    }
    if (root > 0.0) return root;
  }
  throw std::logic_error("rho_for_group: no bracketing interval found");
}

GroupCritical lambda_max_sgl(const ProblemData& data, double alpha) {
  const Vector z = data.x.transpose() * data.y;
  const int num_groups = data.groups.num_groups();
  GroupCritical out;
  out.rho = Vector::Zero(num_groups);
  for (int g = 0; g < num_groups; ++g) {
    const auto& idx = data.groups.indices(g);
    Vector zg(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) zg[j] = z[idx[j]];
    if (zg.cwiseAbs().maxCoeff() == 0.0) continue;  // never binds
    out.rho[g] = rho_for_group(zg, alpha);
  }
  out.lambda_max = 0.0;
  for (int g = 0; g < num_groups; ++g) {
    if (out.rho[g] > out.lambda_max) {
      out.lambda_max = out.rho[g];
      out.argmax_group = g;
    }
  }
  out.degenerate = out.argmax_group < 0;
  return out;
}

double lambda1_max_curve(const ProblemData& data, double lambda2) {
  if (lambda2 < 0.0) throw std::invalid_argument("lambda1_max_curve: lambda2 must be nonnegative");
  const Vector z = data.x.transpose() * data.y;
  double best = 0.0;
  for (int g = 0; g < data.groups.num_groups(); ++g) {
    double sq = 0.0;
    for (int i : data.groups.indices(g)) {
      const double m = std::abs(z[i]) - lambda2;
      if (m > 0.0) sq += m * m;
    }
    best = std::max(best, std::sqrt(sq) / data.groups.weight(g));
  }
  return best;
}

double lambda1_max(const ProblemData& data) { return lambda1_max_curve(data, 0.0); }

double lambda2_max(const ProblemData& data) {
  return (data.x.transpose() * data.y).cwiseAbs().maxCoeff();
}

NnCritical lambda_max_nonneg(const ProblemData& data) {
  const Vector z = data.x.transpose() * data.y;
  NnCritical out;
  out.lambda_max = z.maxCoeff(&out.argmax_col);
  out.degenerate = out.lambda_max <= 0.0;
  return out;
}

}  // namespace sgl
