#include "sgl/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sgl/dpc.hpp"
#include "sgl/io.hpp"
#include "sgl/kernels.hpp"
#include "sgl/lambda_bounds.hpp"

namespace sgl {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

std::vector<double> default_alphas() {
  const double deg = M_PI / 180.0;
  return {std::tan(5 * deg),  std::tan(15 * deg), std::tan(30 * deg),
          std::tan(45 * deg), std::tan(60 * deg), std::tan(75 * deg),
          std::tan(85 * deg)};
}

std::pair<ProblemData, Vector> gen_synthetic(const SyntheticSpec& spec) {
  if (spec.n < 1 || spec.p < 1 || spec.g < 1 || spec.g > spec.p)
    throw std::invalid_argument("gen_synthetic: need n, p >= 1 and 1 <= g <= p");
  if (spec.gamma1 <= 0.0 || spec.gamma1 > 100.0 || spec.gamma2 <= 0.0 ||
      spec.gamma2 > 100.0)
    throw std::invalid_argument("gen_synthetic: gamma1, gamma2 must lie in (0, 100]");

  std::mt19937_64 eng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // balanced random partition: shuffled i % g labels, so no group is empty
  std::vector<int> assignment(spec.p);
  for (int i = 0; i < spec.p; ++i) assignment[i] = i % spec.g;
  std::shuffle(assignment.begin(), assignment.end(), eng);

  Matrix x(spec.n, spec.p);
  if (spec.kind == SyntheticKind::independent) {
    for (int r = 0; r < spec.n; ++r)
      for (int c = 0; c < spec.p; ++c) x(r, c) = gauss(eng);
  } else {
    // AR(1) across columns: corr(x_i, x_j) = 0.5^|i-j| in expectation
    const double carry = 0.5;
    const double fresh = std::sqrt(1.0 - carry * carry);
    for (int r = 0; r < spec.n; ++r) {
      x(r, 0) = gauss(eng);
      for (int c = 1; c < spec.p; ++c) x(r, c) = carry * x(r, c - 1) + fresh * gauss(eng);
    }
  }

  GroupPartition groups(assignment, spec.g);
  const int num_sel_groups =
      std::max(1, static_cast<int>(std::lround(spec.gamma1 / 100.0 * spec.g)));
  std::vector<int> group_order(spec.g);
  std::iota(group_order.begin(), group_order.end(), 0);
  std::shuffle(group_order.begin(), group_order.end(), eng);
  group_order.resize(num_sel_groups);
  std::sort(group_order.begin(), group_order.end());

  Vector beta_true = Vector::Zero(spec.p);
  for (int g : group_order) {
    auto idx = groups.indices(g);
    const int take = std::max(
        1, static_cast<int>(std::lround(spec.gamma2 / 100.0 * idx.size())));
    std::shuffle(idx.begin(), idx.end(), eng);
    idx.resize(take);
    std::sort(idx.begin(), idx.end());
    for (int i : idx) beta_true[i] = gauss(eng);
  }

  Vector y = x * beta_true;
  for (int r = 0; r < spec.n; ++r) y[r] += spec.noise_scale * gauss(eng);

  ProblemData data{std::move(x), std::move(y), std::move(groups)};
  validate_problem(data);
  return {std::move(data), std::move(beta_true)};
}

RejectionRatios rejection_ratios(const ScreenResult& screen,
                                 const std::vector<char>& certified_zero,
                                 const GroupPartition* groups) {
  long m = 0;
  for (char z : certified_zero) m += z != 0;
  if (m == 0) return {};
  RejectionRatios out;
  out.applicable = true;
  if (groups && !screen.group_discarded.empty())
    out.r1 = static_cast<double>(screen.features_discarded_l1(*groups)) /
             static_cast<double>(m);
  out.r2 = static_cast<double>(screen.features_discarded_l2()) /
           static_cast<double>(m);
  return out;
}

namespace {

std::vector<double> lambda_grid(double lambda_max, int num, double min_ratio) {
  std::vector<double> out(num);
  for (int j = 0; j < num; ++j) {
    const double t = num > 1 ? static_cast<double>(j) / (num - 1) : 0.0;
    out[j] = lambda_max * std::pow(min_ratio, t);
  }
  return out;
}

struct SweepShared {
  const ProblemData& data;
  const PathConfig& config;
  Vector col_norms;
  Vector group_norms;   // ||X_g||_2, tlfre only
  double full_lipschitz = 0.0;
};

// One alpha sweep of the sequential screen-then-solve protocol; writes the
// per-grid-point records and zero masks into the caller's slots.
void run_sweep(const SweepShared& shared, double alpha, int base_index,
               std::vector<PathRecord>& records,
               std::vector<std::vector<char>>& zero_masks,
               long& safety_violations) {
  const ProblemData& data = shared.data;
  const PathConfig& config = shared.config;
  const int p = static_cast<int>(data.x.cols());
  const bool is_nonneg = config.nonneg || config.mode == ScreenMode::dpc;

  GroupCritical crit;
  NnCritical nn_crit;
  double lambda_max;
  if (is_nonneg) {
    nn_crit = lambda_max_nonneg(data);
    if (nn_crit.degenerate)
      throw std::runtime_error("run_path: degenerate problem (lambda_max <= 0)");
    lambda_max = nn_crit.lambda_max;
  } else {
    crit = lambda_max_sgl(data, alpha);
    if (crit.degenerate)
      throw std::runtime_error("run_path: degenerate problem (X^T y = 0)");
    lambda_max = crit.lambda_max;
  }
  const auto lambdas =
      lambda_grid(lambda_max, config.num_lambda, config.lambda_min_ratio);

  ScreenOptions screen_opts;
  screen_opts.eps_safe_scale = config.eps_safe_scale;
  screen_opts.col_norms = &shared.col_norms;

  Vector beta_prev = Vector::Zero(p);
  double gap_prev = 0.0;

  for (int j = 0; j < config.num_lambda; ++j) {
    const double lambda = lambdas[j];
    PathRecord rec;
    rec.alpha = is_nonneg ? 0.0 : alpha;
    rec.lambda = lambda;
    rec.lambda_ratio = lambda / lambda_max;

    ScreenResult screen;
    std::vector<char> mask;  // empty = no masking
    if (config.mode != ScreenMode::none) {
      const auto t0 = Clock::now();
      if (j == 0) {
        // lambda = lambda_max: theta* = y/lambda_max exactly, zero radius,
        // so the rules reduce to the exact KKT tests (R1)/(R2)/(R3)
        const Vector center = data.y / lambda_max;
        if (config.mode == ScreenMode::dpc) {
          const Vector z = data.x.transpose() * center;
          screen.feature_discarded.assign(p, 0);
          const double eps = config.eps_safe_scale * 2.0;
          for (int i = 0; i < p; ++i)
            if (z[i] < 1.0 - eps) screen.feature_discarded[i] = 1;
        } else {
          screen = screen_with_ball(center, 0.0, data, alpha,
                                    shared.group_norms, screen_opts);
        }
      } else {
        screen_opts.gap_prev = gap_prev;
        const DualPoint theta_prev =
            dual_from_primal(beta_prev, data, lambdas[j - 1]);
        if (config.mode == ScreenMode::dpc) {
          screen = dpc_screen(theta_prev, lambdas[j - 1], lambda, data, nn_crit,
                              screen_opts);
        } else {
          screen = tlfre_screen(theta_prev, lambdas[j - 1], lambda, alpha, data,
                                crit, shared.group_norms, screen_opts);
        }
      }
      rec.screen_ms = ms_since(t0);
      rec.groups_discarded = screen.groups_discarded();
      rec.feat_l1 = screen.features_discarded_l1(data.groups);
      rec.feat_l2 = screen.features_discarded_l2();
      mask.assign(p, 1);
      for (int i = 0; i < p; ++i)
        if (screen.removed(i, data.groups)) mask[i] = 0;
    }

    PrimalSolution sol;
    if (j == 0) {
      // lambda >= lambda_max: beta = 0 analytically, no solve needed
      sol.beta = Vector::Zero(p);
      sol.converged = true;
      sol.objective = 0.5 * data.y.squaredNorm();
    } else {
      SolveConfig solve_cfg = config.solve;
      solve_cfg.warm_start = &beta_prev;
      solve_cfg.active_mask = mask.empty() ? nullptr : &mask;
      if (mask.empty()) solve_cfg.spectral_norm_hint = shared.full_lipschitz;
      const auto t0 = Clock::now();
      sol = is_nonneg ? solve_nnlasso(data, lambda, solve_cfg)
                   : solve_sgl(data, PenaltyParams{lambda, alpha}, solve_cfg);
      rec.solve_ms = ms_since(t0);
    }
    rec.iters = sol.iterations;
    rec.gap = sol.duality_gap;

    std::vector<char> zero_mask(p, 0);
    for (int i = 0; i < p; ++i)
      zero_mask[i] = std::abs(sol.beta[i]) <= config.zero_threshold;

    if (config.reference) {
      const auto& ref_zero = config.reference->zero_masks.at(base_index + j);
      if (config.mode != ScreenMode::none) {
        const auto ratios = rejection_ratios(
            screen, ref_zero, is_nonneg ? nullptr : &data.groups);
        rec.r1 = ratios.r1;
        rec.r2 = ratios.r2;
        for (int i = 0; i < p; ++i)
          if (!mask.empty() && !mask[i] && !ref_zero[i]) ++safety_violations;
      }
    }

    records[base_index + j] = rec;
    if (config.keep_zero_masks) zero_masks[base_index + j] = std::move(zero_mask);
    beta_prev = std::move(sol.beta);
    gap_prev = sol.duality_gap;
  }
}

}  // namespace

PathRunResult run_path(const ProblemData& data, const PathConfig& config) {
  validate_problem(data);
  if (config.num_lambda < 1) throw std::invalid_argument("run_path: num_lambda < 1");
  if (!(config.lambda_min_ratio > 0.0 && config.lambda_min_ratio <= 1.0))
    throw std::invalid_argument("run_path: lambda_min_ratio must lie in (0, 1]");

  const bool is_nonneg = config.nonneg || config.mode == ScreenMode::dpc;
  std::vector<double> alphas =
      is_nonneg ? std::vector<double>{0.0} : config.alphas;
  if (alphas.empty()) alphas = default_alphas();
  const int num_sweeps = static_cast<int>(alphas.size());

  SweepShared shared{data, config, {}, {}, 0.0};
  shared.col_norms = data.x.colwise().norm();
  if (config.mode == ScreenMode::tlfre) {
    shared.group_norms.resize(data.groups.num_groups());
    for (int g = 0; g < data.groups.num_groups(); ++g)
      shared.group_norms[g] = spectral_norm_cols(data.x, data.groups.indices(g));
  }
  if (config.mode == ScreenMode::none || config.solve.spectral_norm_hint > 0.0)
    shared.full_lipschitz = config.solve.spectral_norm_hint > 0.0
                                ? config.solve.spectral_norm_hint
                                : spectral_norm(data.x);

  PathRunResult result;
  result.records.resize(static_cast<std::size_t>(num_sweeps) * config.num_lambda);
  result.zero_masks.resize(result.records.size());
  if (config.reference &&
      config.reference->zero_masks.size() != result.records.size())
    throw std::invalid_argument("run_path: reference grid shape mismatch");

  std::vector<long> violations(num_sweeps, 0);
  const int workers = std::max(1, std::min(config.threads, num_sweeps));
  if (workers == 1) {
    for (int a = 0; a < num_sweeps; ++a)
      run_sweep(shared, alphas[a], a * config.num_lambda, result.records,
                result.zero_masks, violations[a]);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int a = w; a < num_sweeps; a += workers)
            run_sweep(shared, alphas[a], a * config.num_lambda, result.records,
                      result.zero_masks, violations[a]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  for (long v : violations) result.safety_violations += v;
  for (const auto& rec : result.records) {
    result.total_solve_ms += rec.solve_ms;
    result.total_screen_ms += rec.screen_ms;
  }
  if (!config.keep_zero_masks) result.zero_masks.clear();
  return result;
}

namespace {

constexpr const char* kCsvHeader =
    "alpha,lambda,lambda_ratio,groups_discarded,feat_l1,feat_l2,r1,r2,iters,"
    "solve_ms,screen_ms,gap";

}  // namespace

std::string emit_report_csv(const std::vector<PathRecord>& records) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << format_double(r.alpha) << ',' << format_double(r.lambda) << ','
        << format_double(r.lambda_ratio) << ',' << r.groups_discarded << ','
        << r.feat_l1 << ',' << r.feat_l2 << ',' << format_double(r.r1) << ','
        << format_double(r.r2) << ',' << r.iters << ','
        << format_double(r.solve_ms) << ',' << format_double(r.screen_ms) << ','
        << format_double(r.gap) << '\n';
  }
  return out.str();
}

std::string emit_report_json(const std::vector<PathRecord>& records) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  auto& arr = doc["records"] = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"alpha", r.alpha},
                   {"lambda", r.lambda},
                   {"lambda_ratio", r.lambda_ratio},
                   {"groups_discarded", r.groups_discarded},
                   {"feat_l1", r.feat_l1},
                   {"feat_l2", r.feat_l2},
                   {"r1", r.r1},
                   {"r2", r.r2},
                   {"iters", r.iters},
                   {"solve_ms", r.solve_ms},
                   {"screen_ms", r.screen_ms},
                   {"gap", r.gap}});
  }
  return doc.dump(2) + "\n";
}

std::vector<PathRecord> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("parse_report_csv: bad header");
  std::vector<PathRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tok;
    std::vector<std::string> tokens;
    while (std::getline(row, tok, ',')) tokens.push_back(tok);
    if (tokens.size() != 12)
      throw std::runtime_error("parse_report_csv: bad row at line " +
                               std::to_string(line_no));
    PathRecord r;
    r.alpha = std::stod(tokens[0]);
    r.lambda = std::stod(tokens[1]);
    r.lambda_ratio = std::stod(tokens[2]);
    r.groups_discarded = std::stol(tokens[3]);
    r.feat_l1 = std::stol(tokens[4]);
    r.feat_l2 = std::stol(tokens[5]);
    r.r1 = std::stod(tokens[6]);
    r.r2 = std::stod(tokens[7]);
    r.iters = std::stol(tokens[8]);
    r.solve_ms = std::stod(tokens[9]);
    r.screen_ms = std::stod(tokens[10]);
    r.gap = std::stod(tokens[11]);
    out.push_back(r);
  }
  return out;
}

}  // namespace sgl
