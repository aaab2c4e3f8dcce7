#include "sgl/solvers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgl/kernels.hpp"

namespace sgl {

namespace {

// Long-double accumulating dot product; the 1e-12 gap certificates difference
// quantities several orders larger than the target.
double stable_dot(const Vector& a, const Vector& b) {
  long double acc = 0.0L;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    acc += static_cast<long double>(a[i]) * static_cast<long double>(b[i]);
  return static_cast<double>(acc);
}

double stable_sqnorm(const Vector& a) { return stable_dot(a, a); }

// Restriction of the group structure to the masked column set.
struct MaskedLayout {
  std::vector<int> cols;                    // masked position -> original column
  std::vector<std::vector<int>> group_pos;  // per original group, masked positions
  std::vector<double> group_weight;         // sqrt(n_g) of the ORIGINAL group
};

MaskedLayout build_layout(const GroupPartition& groups,
                          const std::vector<char>* mask) {
  MaskedLayout layout;
  const int p = groups.num_features();
  std::vector<int> pos_of(p, -1);
  for (int i = 0; i < p; ++i) {
    if (mask && !(*mask)[i]) continue;
    pos_of[i] = static_cast<int>(layout.cols.size());
    layout.cols.push_back(i);
  }
  layout.group_pos.resize(groups.num_groups());
  layout.group_weight.resize(groups.num_groups());
  for (int g = 0; g < groups.num_groups(); ++g) {
    layout.group_weight[g] = groups.weight(g);
    for (int i : groups.indices(g))
      if (pos_of[i] >= 0) layout.group_pos[g].push_back(pos_of[i]);
  }
  return layout;
}

// Largest s in [0, 1] with ||S_1(s z_g)|| <= alpha sqrt(n_g) for all groups.
// The left side is nondecreasing in s, so bisection is exact to 2^-50.
double feasible_scale_sgl(const Vector& z, const MaskedLayout& layout,
                          double alpha) {
  auto ok = [&](double s) {
    for (std::size_t g = 0; g < layout.group_pos.size(); ++g) {
      double sq = 0.0;
      for (int pos : layout.group_pos[g]) {
        const double m = std::abs(s * z[pos]) - 1.0;
        if (m > 0.0) sq += m * m;
      }
      const double lim = alpha * layout.group_weight[g];
      if (sq > lim * lim) return false;
    }
    return true;
  };
  if (ok(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

double sgl_penalty_masked(const Vector& beta, const MaskedLayout& layout,
                          const PenaltyParams& params) {
  double group_part = 0.0;
  for (std::size_t g = 0; g < layout.group_pos.size(); ++g) {
    double sq = 0.0;
    for (int pos : layout.group_pos[g]) sq += beta[pos] * beta[pos];
    group_part += layout.group_weight[g] * std::sqrt(sq);
  }
  return params.lambda * (params.alpha * group_part + beta.lpNorm<1>());
}

// Duality gap of the masked problem at beta with residual r = y - Xa beta.
// Dual value D(theta) = 0.5||y||^2 - (lambda^2/2)||y/lambda - theta||^2 at
// theta = s r / lambda; the 0.5||y||^2 terms cancel analytically:
// gap = 0.5||r||^2 + penalty - s<y, r> + (s^2/2)||r||^2.
double gap_sgl_masked(const Vector& beta, const Vector& residual,
                      const Matrix& xa, const Vector& y,
                      const MaskedLayout& layout, const PenaltyParams& params) {
  const Vector z = xa.transpose() * (residual / params.lambda);
  const double s = feasible_scale_sgl(z, layout, params.alpha);
  const double rr = stable_sqnorm(residual);
  const double gap = 0.5 * rr + sgl_penalty_masked(beta, layout, params) -
                     s * stable_dot(y, residual) + 0.5 * s * s * rr;
  return std::max(gap, 0.0);
}

double gap_nn_masked(const Vector& beta, const Vector& residual,
                     const Matrix& xa, const Vector& y, double lambda) {
  const Vector z = xa.transpose() * (residual / lambda);
  const double zmax = z.size() > 0 ? z.maxCoeff() : 0.0;
  const double s = zmax > 1.0 ? 1.0 / zmax : 1.0;
  const double rr = stable_sqnorm(residual);
  const double gap = 0.5 * rr + lambda * beta.lpNorm<1>() -
                     s * stable_dot(y, residual) + 0.5 * s * s * rr;
  return std::max(gap, 0.0);
}

// Shared FISTA driver with backtracking on the smooth Lipschitz constant;
// Prox (taking the current step), Gap, and Polish close over the problem
// structure. Polish refines a near-optimal iterate on its active set (Newton
// on the stationarity system); the scaled dual point's gap is first order in
// the primal error, so prox iterations alone cannot certify 1e-12 gaps.
template <class Prox, class Gap, class Penalty, class Polish>
PrimalSolution fista(const Matrix& xa, const Vector& y, const SolveConfig& config,
                     const Vector& beta0, Prox&& prox, Gap&& gap_fn,
                     Penalty&& penalty_fn, Polish&& polish_fn, double lipschitz) {
  const Eigen::Index pa = xa.cols();
  PrimalSolution out;
  out.beta = beta0;

  auto objective = [&](const Vector& b, Vector& residual) {
    residual = y - xa * b;
    return 0.5 * residual.squaredNorm() + penalty_fn(b);
  };

  Vector residual;
  double obj = objective(out.beta, residual);
  out.objective = obj;
  out.duality_gap = gap_fn(out.beta, residual);
  if (out.duality_gap <= config.tol_gap * std::max(1.0, std::abs(obj)) || pa == 0) {
    out.converged = true;
    return out;
  }

  // gradient Lipschitz constant ||Xa||_2^2; a cached spectral norm seeds it,
  // otherwise the max column norm (a lower bound backtracking corrects)
  double smooth_l = lipschitz > 0.0 ? lipschitz * lipschitz
                                    : xa.colwise().norm().maxCoeff();
  smooth_l = std::max(smooth_l, 1e-300);

  Vector beta = out.beta;
  Vector r_beta = residual;  // y - xa * beta, refreshed every iteration
  Vector r_best = residual;  // residual of out.beta
  Vector w = beta;
  Vector r_w = residual;
  Vector beta_new(pa);
  Vector r_new(y.size());
  double t = 1.0;
  const int check_every = std::max(1, config.gap_check_every);
  int last_polish = 0;
  int polish_wait = check_every;

  // proximal step from `from` with backtracking: double smooth_l until the
  // quadratic upper bound of the smooth part holds at the prox point; the
  // caller supplies r_from = y - xa * from so only the trial point needs a
  // fresh residual
  auto prox_step = [&](const Vector& from, const Vector& r_from, Vector& result,
                       Vector& res_out, double& obj_out) {
    const double f_from = 0.5 * r_from.squaredNorm();
    const Vector grad = -(xa.transpose() * r_from);
    for (int bt = 0; bt < 100; ++bt) {
      const double step = 1.0 / smooth_l;
      result = prox(from - step * grad, step);
      obj_out = objective(result, res_out);
      const Vector d = result - from;
      const double bound = f_from + grad.dot(d) +
                           0.5 * smooth_l * d.squaredNorm() +
                           1e-12 * std::max(1.0, f_from);
      if (0.5 * res_out.squaredNorm() <= bound) return;
      smooth_l *= 2.0;
    }
  };

  for (int it = 1; it <= config.max_iter; ++it) {
    double obj_new;
    prox_step(w, r_w, beta_new, r_new, obj_new);
    if (obj_new > obj) {
      // adaptive restart: plain descent step from the last iterate
      prox_step(beta, r_beta, beta_new, r_new, obj_new);
      t = 1.0;
    }
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double m = (t - 1.0) / t_new;
    w = beta_new + m * (beta_new - beta);
    r_w = r_new + m * (r_new - r_beta);
    beta = beta_new;
    r_beta = r_new;
    t = t_new;
    if (obj_new <= obj) {
      obj = obj_new;
      out.beta = beta;
      r_best = r_beta;
      out.objective = obj;
    }
    out.iterations = it;
    if (it % check_every == 0) {
      out.duality_gap = gap_fn(out.beta, r_best);
      const double scale = std::max(1.0, std::abs(obj));
      if (out.duality_gap <= config.tol_gap * scale) {
        out.converged = true;
        return out;
      }
      // attempt a polish well before prox iterations reach the target; a
      // failed attempt (support not settled yet) backs off exponentially
      if (out.duality_gap <= std::max(1e4 * config.tol_gap * scale, 1e-2 * scale) &&
          it >= last_polish + polish_wait) {
        last_polish = it;
        Vector candidate = polish_fn(out.beta);
        Vector cand_res;
        const double cand_obj = objective(candidate, cand_res);
        const double cand_gap = gap_fn(candidate, cand_res);
        if (cand_gap < out.duality_gap) {
          polish_wait = check_every;
          out.beta = candidate;
          r_best = cand_res;
          out.duality_gap = cand_gap;
          if (cand_obj <= obj) {
            obj = cand_obj;
            out.objective = cand_obj;
            beta = candidate;
            r_beta = cand_res;
            w = candidate;
            r_w = cand_res;
            t = 1.0;
          }
          if (cand_gap <=
              config.tol_gap * std::max(1.0, std::abs(cand_obj))) {
            out.objective = cand_obj;
            out.converged = true;
            return out;
          }
        } else {
          polish_wait = std::min(polish_wait * 2, 100 * check_every);
        }
      }
    }
  }
  out.duality_gap = gap_fn(out.beta, r_best);
  out.converged =
      out.duality_gap <= config.tol_gap * std::max(1.0, std::abs(out.objective));
  return out;
}

// Newton refinement of the SGL stationarity system on the current support:
// for active i in group g, x_i^T(X beta - y) + lambda(alpha w_g beta_i /
// ||beta_g|| + sgn(beta_i)) = 0. Signs and support are frozen from the input;
// the caller only adopts the result if the duality gap improves.
Vector polish_sgl(const Vector& beta, const Matrix& xa, const Vector& y,
                  const MaskedLayout& layout, const PenaltyParams& params) {
  std::vector<int> active;
  for (Eigen::Index i = 0; i < beta.size(); ++i)
    if (beta[i] != 0.0) active.push_back(static_cast<int>(i));
  const int na = static_cast<int>(active.size());
  if (na == 0 || na > 2048) return beta;

  std::vector<int> active_pos(beta.size(), -1);
  for (int k = 0; k < na; ++k) active_pos[active[k]] = k;
  Matrix x_act(xa.rows(), na);
  for (int k = 0; k < na; ++k) x_act.col(k) = xa.col(active[k]);
  const Matrix hessian0 = x_act.transpose() * x_act;
  const Vector xty = x_act.transpose() * y;

  Vector b(na);
  Vector sign(na);
  for (int k = 0; k < na; ++k) {
    b[k] = beta[active[k]];
    sign[k] = beta[active[k]] > 0.0 ? 1.0 : -1.0;
  }

  const double l1 = params.lambda * params.alpha;
  Vector best = b;
  double best_norm = std::numeric_limits<double>::infinity();
  for (int round = 0; round < 6; ++round) {
    Vector grad = hessian0 * b - xty + params.lambda * sign;
    Matrix jac = hessian0;
    for (std::size_t g = 0; g < layout.group_pos.size(); ++g) {
      std::vector<int> pos;
      for (int p : layout.group_pos[g])
        if (active_pos[p] >= 0) pos.push_back(active_pos[p]);
      if (pos.empty()) continue;
      double sq = 0.0;
      for (int k : pos) sq += b[k] * b[k];
      const double norm = std::sqrt(sq);
      if (norm == 0.0) return beta;
      const double coeff = l1 * layout.group_weight[g];
      for (int k : pos) grad[k] += coeff * b[k] / norm;
      for (int k : pos)
        for (int m : pos)
          jac(k, m) += coeff * ((k == m ? 1.0 : 0.0) / norm -
                                b[k] * b[m] / (norm * norm * norm));
    }
    const double grad_norm = grad.lpNorm<Eigen::Infinity>();
    if (grad_norm < best_norm) {
      best_norm = grad_norm;
      best = b;
    } else {
      break;
    }
    Eigen::LDLT<Matrix> ldlt(jac);
    if (ldlt.info() != Eigen::Success) break;
    const Vector delta = ldlt.solve(grad);
    if (!delta.allFinite()) break;
    b -= delta;
    bool flipped = false;
    for (int k = 0; k < na; ++k)
      if (b[k] * sign[k] <= 0.0) flipped = true;
    if (flipped) break;
  }

  Vector out = Vector::Zero(beta.size());
  for (int k = 0; k < na; ++k) out[active[k]] = best[k];
  return out;
}

// Exact solve of the nonnegative-lasso stationarity system on the positive
// support: X_A^T X_A beta_A = X_A^T y - lambda, dropping coordinates that
// come out nonpositive.
Vector polish_nn(const Vector& beta, const Matrix& xa, const Vector& y,
                 double lambda) {
  std::vector<int> active;
  for (Eigen::Index i = 0; i < beta.size(); ++i)
    if (beta[i] > 0.0) active.push_back(static_cast<int>(i));
  if (active.empty() || active.size() > 2048) return beta;

  for (int round = 0; round < 10 && !active.empty(); ++round) {
    const int na = static_cast<int>(active.size());
    Matrix x_act(xa.rows(), na);
    for (int k = 0; k < na; ++k) x_act.col(k) = xa.col(active[k]);
    Eigen::LDLT<Matrix> ldlt(x_act.transpose() * x_act);
    if (ldlt.info() != Eigen::Success) return beta;
    const Vector rhs =
        x_act.transpose() * y - Vector::Constant(na, lambda);
    const Vector sol = ldlt.solve(rhs);
    if (!sol.allFinite()) return beta;
    std::vector<int> keep;
    for (int k = 0; k < na; ++k)
      if (sol[k] > 0.0) keep.push_back(active[k]);
    if (static_cast<int>(keep.size()) == na) {
      Vector out = Vector::Zero(beta.size());
      for (int k = 0; k < na; ++k) out[active[k]] = sol[k];
      return out;
    }
    active = std::move(keep);
  }
  return beta;
}

Vector scatter(const Vector& masked, const std::vector<int>& cols, Eigen::Index p) {
  Vector full = Vector::Zero(p);
  for (std::size_t j = 0; j < cols.size(); ++j) full[cols[j]] = masked[j];
  return full;
}

}  // namespace

PrimalSolution solve_sgl(const ProblemData& data, const PenaltyParams& params,
                         const SolveConfig& config) {
  if (params.lambda <= 0.0) throw std::invalid_argument("solve_sgl: lambda must be positive");
  const MaskedLayout layout = build_layout(data.groups, config.active_mask);
  const Matrix xa = gather_columns(data.x, layout.cols);
  Vector beta0 = Vector::Zero(xa.cols());
  if (config.warm_start) {
    for (std::size_t j = 0; j < layout.cols.size(); ++j)
      beta0[j] = (*config.warm_start)[layout.cols[j]];
  }
  auto prox = [&](const Vector& v, double step) {
    Vector u(v.size());
    for (std::size_t g = 0; g < layout.group_pos.size(); ++g) {
      const auto& pos = layout.group_pos[g];
      if (pos.empty()) continue;
      Vector vg(static_cast<Eigen::Index>(pos.size()));
      for (std::size_t j = 0; j < pos.size(); ++j) vg[j] = v[pos[j]];
      const Vector ug = prox_sgl_group(
          vg, step * params.lambda * params.alpha * layout.group_weight[g],
          step * params.lambda);
      for (std::size_t j = 0; j < pos.size(); ++j) u[pos[j]] = ug[j];
    }
    return u;
  };
  auto gap = [&](const Vector& b, const Vector& r) {
    return gap_sgl_masked(b, r, xa, data.y, layout, params);
  };
  auto penalty = [&](const Vector& b) { return sgl_penalty_masked(b, layout, params); };
  auto polish = [&](const Vector& b) {
    return polish_sgl(b, xa, data.y, layout, params);
  };

  PrimalSolution masked = fista(xa, data.y, config, beta0, prox, gap, penalty,
                                polish, config.spectral_norm_hint);
  masked.beta = scatter(masked.beta, layout.cols, data.x.cols());
  return masked;
}

PrimalSolution solve_nnlasso(const ProblemData& data, double lambda,
                             const SolveConfig& config) {
  if (lambda <= 0.0) throw std::invalid_argument("solve_nnlasso: lambda must be positive");
  const MaskedLayout layout = build_layout(data.groups, config.active_mask);
  const Matrix xa = gather_columns(data.x, layout.cols);
  Vector beta0 = Vector::Zero(xa.cols());
  if (config.warm_start) {
    for (std::size_t j = 0; j < layout.cols.size(); ++j)
      beta0[j] = std::max((*config.warm_start)[layout.cols[j]], 0.0);
  }
  auto prox = [lambda](const Vector& v, double step) {
    const double thresh = step * lambda;
    return v.unaryExpr([thresh](double val) { return std::max(val - thresh, 0.0); })
        .eval();
  };
  auto gap = [&](const Vector& b, const Vector& r) {
    return gap_nn_masked(b, r, xa, data.y, lambda);
  };
  auto penalty = [lambda](const Vector& b) { return lambda * b.lpNorm<1>(); };
  auto polish = [&](const Vector& b) { return polish_nn(b, xa, data.y, lambda); };

  PrimalSolution masked = fista(xa, data.y, config, beta0, prox, gap, penalty,
                                polish, config.spectral_norm_hint);
  masked.beta = scatter(masked.beta, layout.cols, data.x.cols());
  return masked;
}

double duality_gap_sgl(const Vector& beta, const ProblemData& data,
                       const PenaltyParams& params) {
  const MaskedLayout layout = build_layout(data.groups, nullptr);
  const Vector residual = data.y - data.x * beta;
  return gap_sgl_masked(beta, residual, data.x, data.y, layout, params);
}

double duality_gap_nnlasso(const Vector& beta, const ProblemData& data,
                           double lambda) {
  const Vector residual = data.y - data.x * beta;
  return gap_nn_masked(beta, residual, data.x, data.y, lambda);
}

KktReport kkt_check_sgl(const Vector& beta, const ProblemData& data,
                        const PenaltyParams& params) {
  KktReport report;
  const Vector theta = (data.y - data.x * beta) / params.lambda;
  const Vector z = data.x.transpose() * theta;
  double stationarity = 0.0;
  double feasibility = 0.0;
  for (int g = 0; g < data.groups.num_groups(); ++g) {
    const auto& idx = data.groups.indices(g);
    double norm_sq = 0.0;
    for (int i : idx) norm_sq += beta[i] * beta[i];
    const double group_norm = std::sqrt(norm_sq);
    const double limit = params.alpha * data.groups.weight(g);
    double margin_sq = 0.0;
    for (int i : idx) {
      const double m = std::abs(z[i]) - 1.0;
      if (m > 0.0) margin_sq += m * m;
    }
    const double slack = std::sqrt(margin_sq) - limit;
    feasibility = std::max(feasibility, std::max(slack, 0.0));
    if (group_norm == 0.0) {
      stationarity = std::max(stationarity, std::max(slack, 0.0));
      continue;
    }
    for (int i : idx) {
      const double bi = beta[i];
      double viol;
      if (bi != 0.0) {
        const double expected = limit * bi / group_norm + (bi > 0.0 ? 1.0 : -1.0);
        viol = std::abs(z[i] - expected);
      } else {
        viol = std::max(std::abs(z[i]) - 1.0, 0.0);
      }
      stationarity = std::max(stationarity, viol);
    }
  }
  report.stationarity_residual = stationarity;
  report.feasibility_residual = feasibility;
  report.gap = duality_gap_sgl(beta, data, params);
  return report;
}

KktReport kkt_check_nnlasso(const Vector& beta, const ProblemData& data,
                            double lambda) {
  KktReport report;
  const Vector theta = (data.y - data.x * beta) / lambda;
  const Vector z = data.x.transpose() * theta;
  double stationarity = 0.0;
  double feasibility = 0.0;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    if (beta[i] > 0.0) {
      stationarity = std::max(stationarity, std::abs(z[i] - 1.0));
    } else {
      stationarity = std::max(stationarity, std::max(z[i] - 1.0, 0.0));
    }
    feasibility = std::max(feasibility, std::max(-beta[i], 0.0));
  }
  report.stationarity_residual = stationarity;
  report.feasibility_residual = feasibility;
  report.gap = duality_gap_nnlasso(beta, data, lambda);
  return report;
}

}  // namespace sgl
