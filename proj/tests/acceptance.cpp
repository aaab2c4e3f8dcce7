// Acceptance gate: one line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "sgl/dpc.hpp"
#include "sgl/harness.hpp"
#include "sgl/kernels.hpp"
#include "sgl/lambda_bounds.hpp"
#include "sgl/solvers.hpp"
#include "sgl/tlfre.hpp"

using namespace sgl;

namespace {

struct Verdict {
  int id = 0;
  bool pass = false;
  std::string detail;
};

std::vector<Verdict> verdicts;

void report(int id, bool pass, const std::string& detail) {
  verdicts.push_back({id, pass, detail});
  std::fprintf(stderr, "[acceptance] criterion %d done: %s\n", id,
               pass ? "pass" : "fail");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

std::vector<SyntheticSpec> reduced_specs() {
  std::vector<SyntheticSpec> specs;
  for (auto kind : {SyntheticKind::independent, SyntheticKind::ar_correlated})
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      SyntheticSpec s;
      s.kind = kind;
      s.n = 100;
      s.p = 2000;
      s.g = 200;
      s.seed = seed;
      specs.push_back(s);
    }
  return specs;
}

// Criteria 1-2: screened paths on ten reduced datasets never discard an
// index that is nonzero (above 1e-8) in the unscreened tol-1e-12 solution.
void safety_criterion(int id, ScreenMode mode) {
  const auto t0 = std::chrono::steady_clock::now();
  long violations = 0;
  bool degenerate = false;
  for (const auto& spec : reduced_specs()) {
    auto [data, truth] = gen_synthetic(spec);
    PathConfig ref;
    ref.solve.tol_gap = 1e-12;
    ref.nonneg = mode == ScreenMode::dpc;
    const auto reference = run_path(data, ref);
    PathConfig scr = ref;
    scr.mode = mode;
    scr.solve.tol_gap = 1e-8;
    scr.reference = &reference;
    const auto run = run_path(data, scr);
    violations += run.safety_violations;
    degenerate = degenerate || run.degenerate || reference.degenerate;
  }
  report(id, violations == 0 && !degenerate,
         fmt("(violations %.0f over 10 datasets, %.1f s)",
             static_cast<double>(violations), seconds_since(t0)));
}

// Criteria 3 and 10 share one full-scale Synthetic 1 experiment: rejection
// ratios of the screened path and its wall-clock against the unscreened one.
void full_scale_sgl() {
  const auto t0 = std::chrono::steady_clock::now();
  SyntheticSpec spec;
  spec.n = 250;
  spec.p = 10000;
  spec.g = 1000;
  spec.seed = 0;
  auto [data, truth] = gen_synthetic(spec);

  PathConfig ref;
  ref.solve.tol_gap = 1e-8;
  auto ref_t0 = std::chrono::steady_clock::now();
  const auto reference = run_path(data, ref);
  const double ref_wall = seconds_since(ref_t0);

  PathConfig scr = ref;
  scr.mode = ScreenMode::tlfre;
  scr.reference = &reference;
  auto scr_t0 = std::chrono::steady_clock::now();
  const auto run = run_path(data, scr);
  const double scr_wall = seconds_since(scr_t0);

  double min_ratio = 2.0;
  for (const auto& rec : run.records)
    min_ratio = std::min(min_ratio, rec.r1 + rec.r2);
  report(3,
         min_ratio >= 0.90 && run.safety_violations == 0 &&
             run.records.size() == 700,
         fmt("(min r1+r2 = %.4f over 700 pairs, %.1f s)", min_ratio,
             seconds_since(t0)));

  const double screen_frac = run.total_screen_ms / reference.total_solve_ms;
  report(10, scr_wall <= 0.5 * ref_wall && screen_frac <= 0.05,
         fmt("(screened %.1f s vs unscreened %.1f s, screen/solve = %.4f)",
             scr_wall, ref_wall, screen_frac));
}

// Criterion 4: DPC keeps the mean rejection ratio on the full-scale
// nonnegative path at 0.95 or above.
void full_scale_dpc() {
  const auto t0 = std::chrono::steady_clock::now();
  SyntheticSpec spec;
  spec.n = 250;
  spec.p = 10000;
  spec.g = 1000;
  spec.seed = 0;
  auto [data, truth] = gen_synthetic(spec);

  PathConfig ref;
  ref.solve.tol_gap = 1e-8;
  ref.nonneg = true;
  const auto reference = run_path(data, ref);
  PathConfig scr = ref;
  scr.mode = ScreenMode::dpc;
  scr.reference = &reference;
  const auto run = run_path(data, scr);

  double mean_r2 = 0.0;
  for (const auto& rec : run.records) mean_r2 += rec.r2;
  mean_r2 /= static_cast<double>(run.records.size());
  report(4, mean_r2 >= 0.95 && run.safety_violations == 0,
         fmt("(mean rejection = %.4f, %.1f s)", mean_r2, seconds_since(t0)));
}

bool all_zero(const Vector& beta) {
  return beta.lpNorm<Eigen::Infinity>() <= 1e-10;
}

// Criterion 5: the computed critical value separates zero from nonzero
// solutions for SGL (three alpha values) and nonnegative Lasso.
void lambda_max_criterion() {
  std::mt19937_64 eng(501);
  const double alphas[] = {std::tan(15.0 * std::numbers::pi / 180.0), 1.0,
                           std::tan(75.0 * std::numbers::pi / 180.0)};
  SolveConfig cfg;
  cfg.tol_gap = 1e-10;
  int checked = 0, wrong = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const auto data = test_helpers::random_problem(40, 100, 20, eng);
    for (double alpha : alphas) {
      const auto crit = lambda_max_sgl(data, alpha);
      const auto hi = solve_sgl(data, {1.01 * crit.lambda_max, alpha}, cfg);
      const auto lo = solve_sgl(data, {0.95 * crit.lambda_max, alpha}, cfg);
      ++checked;
      if (crit.degenerate || !hi.converged || !lo.converged ||
          !all_zero(hi.beta) || all_zero(lo.beta))
        ++wrong;
    }
    const auto nn = lambda_max_nonneg(data);
    const auto hi = solve_nnlasso(data, 1.01 * nn.lambda_max, cfg);
    const auto lo = solve_nnlasso(data, 0.95 * nn.lambda_max, cfg);
    ++checked;
    if (nn.degenerate || !hi.converged || !lo.converged ||
        !all_zero(hi.beta) || all_zero(lo.beta))
      ++wrong;
  }
  report(5, wrong == 0,
         fmt("(%.0f boundary pairs, %.0f wrong)", checked, wrong));
}

// Criterion 6: the lambda1 critical curve of the (lambda1, lambda2)
// formulation separates zero from nonzero solutions at five lambda2 values.
void lambda1_curve_criterion() {
  std::mt19937_64 eng(601);
  SolveConfig cfg;
  cfg.tol_gap = 1e-10;
  int wrong = 0;
  for (int inst = 0; inst < 10; ++inst) {
    const auto data = test_helpers::random_problem(30, 80, 16, eng);
    const double l2max = lambda2_max(data);
    for (double frac : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double l2 = frac * l2max;
      const double l1c = lambda1_max_curve(data, l2);
      const auto hi =
          solve_sgl(data, PenaltyParams::from_lambda12(1.01 * l1c, l2), cfg);
      const auto lo =
          solve_sgl(data, PenaltyParams::from_lambda12(0.95 * l1c, l2), cfg);
      if (!hi.converged || !lo.converged || !all_zero(hi.beta) ||
          all_zero(lo.beta))
        ++wrong;
    }
  }
  report(6, wrong == 0, fmt("(50 boundary pairs, %.0f wrong)", wrong));
}

// Criterion 7: closed-form ball suprema dominate Monte-Carlo estimates and
// are attained by the analytic witnesses.
void suprema_criterion() {
  std::mt19937_64 eng(701);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> dim_pick(2, 8);
  int wrong = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = dim_pick(eng);
    Vector c = test_helpers::random_vector(d, eng);
    const double cinf = c.lpNorm<Eigen::Infinity>();
    double target;
    switch (trial % 3) {
      case 0: target = 1.05 + 2.0 * unif(eng); break;
      case 1: target = 1.0; break;
      default: target = 0.05 + 0.9 * unif(eng); break;
    }
    c *= target / cinf;
    if (trial % 3 == 1) {
      // pin the boundary case exactly at ||c||_inf = 1
      int j = 0;
      c.cwiseAbs().maxCoeff(&j);
      for (int i = 0; i < d; ++i)
        if (i != j) c[i] *= 1.0 - 1e-12;
      c[j] = std::copysign(1.0, c[j]);
    }
    const double r = 0.01 + 1.5 * unif(eng);
    const double closed = sup_group_shrink(c, r);

    double mc = 0.0;
    for (int s = 0; s < 100000; ++s)
      mc = std::max(mc, shrink(test_helpers::sample_ball(c, r, eng), 1.0).norm());
    if (closed < mc - 1e-12) ++wrong;

    // analytic witness per case of the closed form
    Vector xi = c;
    const double ninf = c.lpNorm<Eigen::Infinity>();
    if (ninf > 1.0) {
      const Vector s1 = shrink(c, 1.0);
      xi = c + (r / s1.norm()) * s1;
    } else if (ninf + r > 1.0) {
      int j = 0;
      c.cwiseAbs().maxCoeff(&j);
      xi[j] += c[j] >= 0.0 ? r : -r;
    }
    if (std::abs(shrink(xi, 1.0).norm() - closed) > 1e-10) ++wrong;

    // feature-level supremum against the same ball
    const Vector x = test_helpers::random_vector(d, eng);
    DualBall ball;
    ball.center = c;
    ball.radius = r;
    const double fclosed = sup_feature(x, ball);
    double fmc = 0.0;
    for (int s = 0; s < 100000; ++s)
      fmc = std::max(fmc,
                     std::abs(x.dot(test_helpers::sample_ball(c, r, eng))));
    if (fclosed < fmc - 1e-12) ++wrong;
    const double sgn = x.dot(c) >= 0.0 ? 1.0 : -1.0;
    const Vector fxi = c + (sgn * r / x.norm()) * x;
    if (std::abs(std::abs(x.dot(fxi)) - fclosed) > 1e-10) ++wrong;
  }
  report(7, wrong == 0, fmt("(1000 balls, %.0f discrepancies)", wrong));
}

double rho_bisection(const Vector& z, double alpha) {
  const double target = alpha * std::sqrt(static_cast<double>(z.size()));
  double lo = 1e-12, hi = z.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shrink(z / mid, 1.0).norm() > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Criterion 8: the per-group critical value satisfies its defining equation
// and matches a bisection oracle.
void rho_criterion() {
  std::mt19937_64 eng(801);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> dim_pick(1, 10);
  int wrong = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = dim_pick(eng);
    Vector z = test_helpers::random_vector(d, eng) *
               std::pow(10.0, 4.0 * unif(eng) - 2.0);
    if (z.norm() == 0.0) z[0] = 1.0;
    const double alpha = 0.05 + 10.0 * unif(eng);
    const double rho = rho_for_group(z, alpha);
    const double target = alpha * std::sqrt(static_cast<double>(d));
    if (std::abs(shrink(z / rho, 1.0).norm() - target) > 1e-8 * target)
      ++wrong;
    if (std::abs(rho - rho_bisection(z, alpha)) > 1e-10) ++wrong;
  }
  report(8, wrong == 0, fmt("(1000 roots, %.0f off)", wrong));
}

// Criterion 9: along full reduced-scale paths, the dual optimum of the next
// point stays inside the inflated estimation ball.
void containment_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  SyntheticSpec spec;
  spec.n = 100;
  spec.p = 2000;
  spec.g = 200;
  spec.seed = 0;
  auto [data, truth] = gen_synthetic(spec);
  SolveConfig cfg;
  cfg.tol_gap = 1e-12;
  int wrong = 0, tested = 0;

  for (double alpha : {std::tan(15.0 * std::numbers::pi / 180.0), 1.0,
                       std::tan(75.0 * std::numbers::pi / 180.0)}) {
    const auto crit = lambda_max_sgl(data, alpha);
    const double step = std::pow(0.01, 1.0 / 99.0);
    Vector beta = Vector::Zero(data.num_features());
    double lambda_prev = crit.lambda_max, gap_prev = 0.0;
    SolveConfig warm = cfg;
    for (int j = 1; j < 100; ++j) {
      const double lambda = crit.lambda_max * std::pow(step, j);
      const auto theta_prev = dual_from_primal(beta, data, lambda_prev);
      const auto ball = estimation_ball(theta_prev, lambda_prev, lambda,
                                        data, alpha, crit);
      warm.warm_start = &beta;
      const auto sol = solve_sgl(data, {lambda, alpha}, warm);
      const auto theta = dual_from_primal(sol.beta, data, lambda);
      const double bound = ball.radius +
                           std::sqrt(2.0 * std::max(gap_prev, 0.0)) / lambda +
                           1e-7;
      ++tested;
      if (!sol.converged || (theta.theta - ball.center).norm() > bound)
        ++wrong;
      beta = sol.beta;
      gap_prev = sol.duality_gap;
      lambda_prev = lambda;
    }
  }

  const auto nn = lambda_max_nonneg(data);
  const double step = std::pow(0.01, 1.0 / 99.0);
  Vector beta = Vector::Zero(data.num_features());
  double lambda_prev = nn.lambda_max, gap_prev = 0.0;
  SolveConfig warm = cfg;
  for (int j = 1; j < 100; ++j) {
    const double lambda = nn.lambda_max * std::pow(step, j);
    const auto theta_prev = dual_from_primal(beta, data, lambda_prev);
    const auto ball = nn_estimation_ball(theta_prev, lambda_prev, lambda, data,
                                         nn.lambda_max, nn.argmax_col);
    warm.warm_start = &beta;
    const auto sol = solve_nnlasso(data, lambda, warm);
    const auto theta = dual_from_primal(sol.beta, data, lambda);
    const double bound = ball.radius +
                         std::sqrt(2.0 * std::max(gap_prev, 0.0)) / lambda +
                         1e-7;
    ++tested;
    if (!sol.converged || (theta.theta - ball.center).norm() > bound) ++wrong;
    beta = sol.beta;
    gap_prev = sol.duality_gap;
    lambda_prev = lambda;
  }
  report(9, wrong == 0,
         fmt("(%.0f steps, %.0f escapes, %.1f s)", tested, wrong,
             seconds_since(t0)));
}

// Criterion 11: identical seeds and configs give byte-identical reports once
// the timing columns are zeroed.
void determinism_criterion() {
  auto pipeline = [] {
    SyntheticSpec spec;
    spec.kind = SyntheticKind::ar_correlated;
    spec.n = 60;
    spec.p = 500;
    spec.g = 50;
    spec.seed = 7;
    auto [data, truth] = gen_synthetic(spec);
    PathConfig ref;
    ref.solve.tol_gap = 1e-10;
    const auto reference = run_path(data, ref);
    PathConfig scr = ref;
    scr.mode = ScreenMode::tlfre;
    scr.solve.tol_gap = 1e-8;
    scr.reference = &reference;
    auto run = run_path(data, scr);
    for (auto& rec : run.records) {
      rec.solve_ms = 0.0;
      rec.screen_ms = 0.0;
    }
    return emit_report_csv(run.records) + emit_report_json(run.records);
  };
  const std::string first = pipeline();
  const std::string second = pipeline();
  report(11, first == second,
         first == second ? "(reports byte-identical)" : "(reports differ)");
}

}  // namespace

int main() {
  safety_criterion(1, ScreenMode::tlfre);
  safety_criterion(2, ScreenMode::dpc);
  full_scale_sgl();  // criteria 3 and 10
  full_scale_dpc();
  lambda_max_criterion();
  lambda1_curve_criterion();
  suprema_criterion();
  rho_criterion();
  containment_criterion();
  determinism_criterion();

  std::sort(verdicts.begin(), verdicts.end(),
            [](const Verdict& a, const Verdict& b) { return a.id < b.id; });
  int failures = 0;
  for (const auto& v : verdicts) {
    std::printf("criterion %d: %s%s%s\n", v.id, v.pass ? "PASS" : "FAIL",
                v.detail.empty() ? "" : " ", v.detail.c_str());
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
