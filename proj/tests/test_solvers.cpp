#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "sgl/kernels.hpp"
#include "sgl/lambda_bounds.hpp"
#include "sgl/solvers.hpp"

using namespace sgl;

namespace {

double sgl_objective(const Vector& beta, const ProblemData& data,
                     const PenaltyParams& params) {
  return 0.5 * (data.y - data.x * beta).squaredNorm() +
         sgl_penalty(beta, params, data.groups);
}

}  // namespace

TEST_CASE("lambda >= lambda_max certifies beta = 0 at iteration 0") {
  std::mt19937_64 eng(31);
  ProblemData data = test_helpers::random_problem(15, 30, 5, eng);
  const auto crit = lambda_max_sgl(data, 1.0);
  const auto sol = solve_sgl(data, PenaltyParams{1.05 * crit.lambda_max, 1.0});
  CHECK(sol.converged);
  CHECK(sol.iterations == 0);
  CHECK(sol.beta.norm() == 0.0);
  CHECK(sol.duality_gap <= 1e-12 * std::max(1.0, sol.objective));
}

TEST_CASE("identity design reduces to the per-coordinate prox") {
  const int n = 6;
  Matrix x = Matrix::Identity(n, n);
  std::mt19937_64 eng(32);
  Vector y = 3.0 * test_helpers::random_vector(n, eng);
  ProblemData data{x, y, GroupPartition(test_helpers::cyclic_groups(n, n), n)};
  const PenaltyParams params{0.7, 0.9};
  SolveConfig cfg;
  cfg.tol_gap = 1e-13;
  const auto sol = solve_sgl(data, params, cfg);
  for (int i = 0; i < n; ++i) {
    Vector vi(1);
    vi << y[i];
    const Vector ui =
        prox_sgl_group(vi, params.lambda * params.alpha, params.lambda);
    CHECK(sol.beta[i] == doctest::Approx(ui[0]).epsilon(1e-6));
  }
}

TEST_CASE("objective matches a tighter reference solve from a cold start") {
  std::mt19937_64 eng(33);
  ProblemData data = test_helpers::random_problem(30, 60, 10, eng);
  const double alpha = 1.0;
  const double lambda = 0.3 * lambda_max_sgl(data, alpha).lambda_max;
  const PenaltyParams params{lambda, alpha};

  SolveConfig loose;
  loose.tol_gap = 1e-9;
  const Vector start = test_helpers::random_vector(60, eng);
  loose.warm_start = &start;
  const auto sol = solve_sgl(data, params, loose);

  SolveConfig tight;
  tight.tol_gap = 1e-14;
  const auto ref = solve_sgl(data, params, tight);
  CHECK(sol.objective ==
        doctest::Approx(ref.objective).epsilon(1e-9));
  CHECK(sol.objective + 1e-12 >= ref.objective - ref.duality_gap);
}

TEST_CASE("nonnegative lasso identity example") {
  Matrix x = Matrix::Identity(2, 2);
  Vector y(2);
  y << 3, -1;
  ProblemData data{x, y, GroupPartition({0, 1})};
  SolveConfig cfg;
  cfg.tol_gap = 1e-13;
  const auto sol = solve_nnlasso(data, 1.0, cfg);
  CHECK(sol.beta[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(sol.beta[1] == 0.0);
}

TEST_CASE("nonnegative lasso agrees with a tighter reference") {
  std::mt19937_64 eng(34);
  ProblemData data = test_helpers::random_problem(20, 50, 10, eng);
  const double lambda = 0.2 * lambda_max_nonneg(data).lambda_max;
  SolveConfig loose;
  loose.tol_gap = 1e-9;
  const auto sol = solve_nnlasso(data, lambda, loose);
  CHECK((sol.beta.array() >= 0.0).all());
  SolveConfig tight;
  tight.tol_gap = 1e-14;
  const auto ref = solve_nnlasso(data, lambda, tight);
  CHECK(sol.objective == doctest::Approx(ref.objective).epsilon(1e-9));
}

TEST_CASE("duality gap is a valid certificate") {
  std::mt19937_64 eng(35);
  ProblemData data = test_helpers::random_problem(25, 40, 8, eng);
  const double alpha = 0.8;
  const double lambda_max = lambda_max_sgl(data, alpha).lambda_max;
  const PenaltyParams params{0.4 * lambda_max, alpha};

  // zero is suboptimal below lambda_max, so its gap is strictly positive
  const double gap_zero = duality_gap_sgl(Vector::Zero(40), data, params);
  CHECK(gap_zero > 0.0);

  SolveConfig tight;
  tight.tol_gap = 1e-13;
  const auto ref = solve_sgl(data, params, tight);
  for (int t = 0; t < 20; ++t) {
    const Vector beta = ref.beta + 0.1 * test_helpers::random_vector(40, eng);
    const double gap = duality_gap_sgl(beta, data, params);
    CHECK(gap >= 0.0);
    // weak duality: gap dominates the true suboptimality
    CHECK(gap + 1e-10 >=
          sgl_objective(beta, data, params) - sgl_objective(ref.beta, data, params));
  }
}

TEST_CASE("solving with a correct mask preserves the objective") {
  std::mt19937_64 eng(36);
  ProblemData data = test_helpers::random_problem(25, 50, 10, eng);
  const double alpha = 1.0;
  const PenaltyParams params{0.5 * lambda_max_sgl(data, alpha).lambda_max,
                             alpha};
  SolveConfig cfg;
  cfg.tol_gap = 1e-12;
  const auto full = solve_sgl(data, params, cfg);
  std::vector<char> mask(50, 0);
  for (int i = 0; i < 50; ++i) mask[i] = std::abs(full.beta[i]) > 1e-10;
  SolveConfig masked_cfg = cfg;
  masked_cfg.active_mask = &mask;
  const auto masked = solve_sgl(data, params, masked_cfg);
  const double scale = std::max(1.0, std::abs(full.objective));
  CHECK(std::abs(masked.objective - full.objective) <=
        2.0 * cfg.tol_gap * scale);
  for (int i = 0; i < 50; ++i)
    if (!mask[i]) CHECK(masked.beta[i] == 0.0);
}

TEST_CASE("warm starts do not change the certified solution") {
  std::mt19937_64 eng(37);
  ProblemData data = test_helpers::random_problem(20, 30, 6, eng);
  const PenaltyParams params{0.3 * lambda_max_sgl(data, 1.0).lambda_max, 1.0};
  SolveConfig cfg;
  cfg.tol_gap = 1e-12;
  const auto cold = solve_sgl(data, params, cfg);
  const Vector start = 5.0 * test_helpers::random_vector(30, eng);
  SolveConfig warm_cfg = cfg;
  warm_cfg.warm_start = &start;
  const auto warm = solve_sgl(data, params, warm_cfg);
  CHECK((cold.beta - warm.beta).lpNorm<Eigen::Infinity>() < 1e-5);
}

TEST_CASE("kkt_check_sgl calibration") {
  std::mt19937_64 eng(38);
  ProblemData data = test_helpers::random_problem(25, 40, 8, eng);
  const double alpha = 1.0;
  const auto crit = lambda_max_sgl(data, alpha);

  // zero solution at lambda >= lambda_max has zero residual
  const PenaltyParams high{1.02 * crit.lambda_max, alpha};
  const auto at_zero = kkt_check_sgl(Vector::Zero(40), data, high);
  CHECK(at_zero.stationarity_residual <= 1e-10);

  const PenaltyParams params{0.35 * crit.lambda_max, alpha};
  SolveConfig cfg;
  cfg.tol_gap = 1e-12;
  const auto sol = solve_sgl(data, params, cfg);
  const auto at_opt = kkt_check_sgl(sol.beta, data, params);
  CHECK(at_opt.stationarity_residual <= 1e-5);

  const Vector perturbed =
      sol.beta + 1e-3 * test_helpers::random_vector(40, eng);
  const auto off = kkt_check_sgl(perturbed, data, params);
  CHECK(off.stationarity_residual > at_opt.stationarity_residual);
}

TEST_CASE("kkt_check_nnlasso calibration") {
  std::mt19937_64 eng(39);
  ProblemData data = test_helpers::random_problem(20, 35, 7, eng);
  const auto crit = lambda_max_nonneg(data);
  REQUIRE(!crit.degenerate);

  const auto at_zero =
      kkt_check_nnlasso(Vector::Zero(35), data, 1.02 * crit.lambda_max);
  CHECK(at_zero.stationarity_residual <= 1e-10);

  const double lambda = 0.3 * crit.lambda_max;
  SolveConfig cfg;
  cfg.tol_gap = 1e-12;
  const auto sol = solve_nnlasso(data, lambda, cfg);
  const auto at_opt = kkt_check_nnlasso(sol.beta, data, lambda);
  CHECK(at_opt.stationarity_residual <= 1e-5);

  Vector perturbed = sol.beta;
  perturbed[0] += 1e-3;
  const auto off = kkt_check_nnlasso(perturbed, data, lambda);
  CHECK(off.stationarity_residual >= at_opt.stationarity_residual);
}

TEST_CASE("max_iter exhaustion reports an honest unconverged result") {
  std::mt19937_64 eng(40);
  ProblemData data = test_helpers::random_problem(30, 60, 10, eng);
  const PenaltyParams params{0.05 * lambda_max_sgl(data, 1.0).lambda_max, 1.0};
  SolveConfig cfg;
  cfg.tol_gap = 1e-14;
  cfg.max_iter = 5;
  const auto sol = solve_sgl(data, params, cfg);
  CHECK_FALSE(sol.converged);
  CHECK(sol.duality_gap > 0.0);
}
