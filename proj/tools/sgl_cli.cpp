#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgl/core.hpp"
#include "sgl/harness.hpp"
#include "sgl/io.hpp"
#include "sgl/lambda_bounds.hpp"
#include "sgl/solvers.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

int env_threads() {
  const char* v = std::getenv("SGL_SCREEN_THREADS");
  if (!v) return 1;
  const int n = std::atoi(v);
  return n > 0 ? n : 1;
}

sgl::ProblemData load_problem(const std::string& x_path,
                              const std::string& y_path,
                              const std::string& groups_path) {
  sgl::Matrix x = sgl::load_matrix_csv(x_path);
  sgl::Vector y = sgl::load_vector_csv(y_path);
  std::vector<int> assignment = sgl::load_groups(groups_path);
  int num_groups = 0;
  for (int g : assignment) num_groups = std::max(num_groups, g + 1);
  sgl::ProblemData data{std::move(x), std::move(y),
                        sgl::GroupPartition(assignment, num_groups)};
  sgl::validate_problem(data);
  return data;
}

int cmd_gen(const std::string& kind, int n, int p, int g, double gamma1,
            double gamma2, std::uint64_t seed, const std::string& out_dir) {
  sgl::SyntheticSpec spec;
  spec.kind = kind == "synthetic2" ? sgl::SyntheticKind::ar_correlated
                                   : sgl::SyntheticKind::independent;
  spec.n = n;
  spec.p = p;
  spec.g = g;
  spec.gamma1 = gamma1;
  spec.gamma2 = gamma2;
  spec.seed = seed;
  auto [data, truth] = sgl::gen_synthetic(spec);
  const std::string prefix = out_dir.empty() ? "" : out_dir + "/";
  sgl::save_matrix_csv(prefix + "design.csv", data.x);
  sgl::save_vector_csv(prefix + "response.csv", data.y);
  sgl::save_groups(prefix + "groups.txt", data.groups.assignment());
  sgl::save_vector_csv(prefix + "truth.csv", truth);
  std::cout << "wrote design.csv response.csv groups.txt truth.csv to "
            << (out_dir.empty() ? "." : out_dir) << "\n";
  return 0;
}

int cmd_path(const std::string& x_path, const std::string& y_path,
             const std::string& groups_path, const std::string& mode,
             std::vector<double> alphas, int num_lambda,
             double lambda_min_ratio, double tol, const std::string& out_path,
             bool audit, int threads) {
  const sgl::ProblemData data = load_problem(x_path, y_path, groups_path);

  sgl::PathConfig config;
  config.alphas = std::move(alphas);
  config.num_lambda = num_lambda;
  config.lambda_min_ratio = lambda_min_ratio;
  config.solve.tol_gap = tol;
  config.threads = threads;
  config.mode = mode == "tlfre"  ? sgl::ScreenMode::tlfre
                : mode == "dpc"  ? sgl::ScreenMode::dpc
                                 : sgl::ScreenMode::none;

  sgl::PathRunResult reference;
  if (audit && config.mode != sgl::ScreenMode::none) {
    sgl::PathConfig ref_config = config;
    ref_config.nonneg = config.mode == sgl::ScreenMode::dpc;
    ref_config.mode = sgl::ScreenMode::none;
    ref_config.solve.tol_gap = 1e-12;
    ref_config.reference = nullptr;
    reference = sgl::run_path(data, ref_config);
    config.reference = &reference;
  }

  const sgl::PathRunResult result = sgl::run_path(data, config);
  const std::string report = sgl::emit_report_csv(result.records);
  if (out_path.empty() || out_path == "-")
    std::cout << report;
  else
    write_text(out_path, report);

  std::cout << "total solve " << sgl::format_double(result.total_solve_ms)
            << " ms, screen " << sgl::format_double(result.total_screen_ms)
            << " ms\n";
  if (config.reference) {
    std::cout << "audit: " << result.safety_violations
              << " safety violation(s)\n";
    if (result.safety_violations > 0) return 2;
  }
  return 0;
}

int cmd_solve(const std::string& x_path, const std::string& y_path,
              const std::string& groups_path, double lambda, double alpha,
              bool nonneg, double tol, const std::string& out_path) {
  const sgl::ProblemData data = load_problem(x_path, y_path, groups_path);
  sgl::SolveConfig config;
  config.tol_gap = tol;

  sgl::PrimalSolution sol;
  sgl::KktReport kkt;
  if (nonneg) {
    sol = sgl::solve_nnlasso(data, lambda, config);
    kkt = sgl::kkt_check_nnlasso(sol.beta, data, lambda);
  } else {
    const sgl::PenaltyParams params{lambda, alpha};
    sol = sgl::solve_sgl(data, params, config);
    kkt = sgl::kkt_check_sgl(sol.beta, data, params);
  }
  sgl::save_vector_csv(out_path, sol.beta);
  std::cout << "objective " << sgl::format_double(sol.objective) << "\n"
            << "duality_gap " << sgl::format_double(sol.duality_gap) << "\n"
            << "iterations " << sol.iterations << "\n"
            << "converged " << (sol.converged ? "yes" : "no") << "\n"
            << "kkt_stationarity " << sgl::format_double(kkt.stationarity_residual)
            << "\n"
            << "kkt_feasibility " << sgl::format_double(kkt.feasibility_residual)
            << "\n";
  return sol.converged ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Screening-accelerated sparse-group lasso and nonnegative "
               "lasso toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic benchmark dataset");
  std::string gen_kind;
  int gen_n = 0, gen_p = 0, gen_g = 0;
  double gen_gamma1 = 10.0, gen_gamma2 = 10.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out = ".";
  gen->add_option("kind", gen_kind, "synthetic1 (i.i.d.) or synthetic2 (AR)")
      ->required()
      ->check(CLI::IsMember({"synthetic1", "synthetic2"}));
  gen->add_option("--n", gen_n, "rows")->required()->check(CLI::PositiveNumber);
  gen->add_option("--p", gen_p, "features")->required()->check(CLI::PositiveNumber);
  gen->add_option("--groups", gen_g, "number of groups")
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("--gamma1", gen_gamma1, "percent of groups with signal");
  gen->add_option("--gamma2", gen_gamma2, "percent of features per chosen group");
  gen->add_option("--seed", gen_seed, "RNG seed")->required();
  gen->add_option("--out-dir", gen_out, "output directory");

  // path
  auto* path = app.add_subcommand("path", "Run a regularization path with screening");
  std::string path_x, path_y, path_groups, path_mode = "tlfre",
              path_out = "report.csv";
  std::vector<double> path_alphas;
  int path_num_lambda = 100;
  double path_min_ratio = 0.01, path_tol = 1e-8;
  bool path_audit = false;
  int path_threads = env_threads();
  path->add_option("--x", path_x, "design matrix CSV")->required();
  path->add_option("--y", path_y, "response CSV")->required();
  path->add_option("--groups", path_groups, "group index file")->required();
  path->add_option("--mode", path_mode, "tlfre, dpc, or none")
      ->check(CLI::IsMember({"tlfre", "dpc", "none"}));
  path->add_option("--alphas", path_alphas,
                   "alpha list (default: tan of 5,15,30,45,60,75,85 degrees)");
  path->add_option("--num-lambda", path_num_lambda, "grid points per sweep")
      ->check(CLI::PositiveNumber);
  path->add_option("--lambda-min-ratio", path_min_ratio,
                   "smallest lambda as a fraction of lambda_max");
  path->add_option("--tol", path_tol, "relative duality gap target");
  path->add_option("--out", path_out, "report CSV path ('-' for stdout)");
  path->add_flag("--audit", path_audit,
                 "cross-check screening against an unscreened tol-1e-12 run");
  path->add_option("--threads", path_threads, "max concurrent alpha sweeps")
      ->check(CLI::PositiveNumber);

  // solve
  auto* solve = app.add_subcommand("solve", "Solve a single (lambda, alpha) problem");
  std::string solve_x, solve_y, solve_groups, solve_out = "beta.csv";
  double solve_lambda = 0.0, solve_alpha = 1.0, solve_tol = 1e-8;
  bool solve_nonneg = false;
  solve->add_option("--x", solve_x, "design matrix CSV")->required();
  solve->add_option("--y", solve_y, "response CSV")->required();
  solve->add_option("--groups", solve_groups, "group index file")->required();
  solve->add_option("--lambda", solve_lambda, "regularization level")
      ->required()
      ->check(CLI::PositiveNumber);
  solve->add_option("--alpha", solve_alpha, "group-penalty weight");
  solve->add_flag("--nonneg", solve_nonneg,
                  "solve nonnegative lasso instead of sparse-group lasso");
  solve->add_option("--tol", solve_tol, "relative duality gap target");
  solve->add_option("--out", solve_out, "solution CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen)
      return cmd_gen(gen_kind, gen_n, gen_p, gen_g, gen_gamma1, gen_gamma2,
                     gen_seed, gen_out);
    if (*path)
      return cmd_path(path_x, path_y, path_groups, path_mode, path_alphas,
                      path_num_lambda, path_min_ratio, path_tol, path_out,
                      path_audit, path_threads);
    if (*solve)
      return cmd_solve(solve_x, solve_y, solve_groups, solve_lambda,
                       solve_alpha, solve_nonneg, solve_tol, solve_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
