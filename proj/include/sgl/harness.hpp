#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "sgl/core.hpp"
#include "sgl/solvers.hpp"
#include "sgl/tlfre.hpp"

namespace sgl {

enum class SyntheticKind { independent, ar_correlated };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::independent;
  int n = 0;
  int p = 0;
  int g = 0;
  double gamma1 = 10.0;  // percent of groups carrying signal
  double gamma2 = 10.0;  // percent of features per selected group
  double noise_scale = 0.01;
  std::uint64_t seed = 0;
};

/// Gaussian design (i.i.d. or AR(1) with corr 0.5^|i-j| across columns),
/// random balanced group partition, sparse Gaussian truth,
/// y = X beta* + noise_scale * eps. Deterministic in the seed.
std::pair<ProblemData, Vector> gen_synthetic(const SyntheticSpec& spec);

enum class ScreenMode { none, tlfre, dpc };

struct PathRecord {
  double alpha = 0.0;
  double lambda = 0.0;
  double lambda_ratio = 0.0;
  long groups_discarded = 0;
  long feat_l1 = 0;
  long feat_l2 = 0;
  double r1 = 0.0;
  double r2 = 0.0;
  long iters = 0;
  double solve_ms = 0.0;
  double screen_ms = 0.0;
  double gap = 0.0;
};

struct RejectionRatios {
  double r1 = 0.0;
  double r2 = 0.0;
  bool applicable = false;  // false when the certified zero set is empty
};

/// r1 = (sum of n_g over flagged groups) / m, r2 = (L2-flagged count) / m,
/// m = |certified zero set|. For feature-only rules everything lands in r2.
RejectionRatios rejection_ratios(const ScreenResult& screen,
                                 const std::vector<char>& certified_zero,
                                 const GroupPartition* groups);

struct PathRunResult {
  std::vector<PathRecord> records;
  // Per record: |beta_i| <= zero_threshold mask of this run's solution.
  std::vector<std::vector<char>> zero_masks;
  long safety_violations = 0;  // screened-out indices nonzero in the reference
  double total_solve_ms = 0.0;
  double total_screen_ms = 0.0;
  bool degenerate = false;
};

struct PathConfig {
  std::vector<double> alphas;  // ignored for dpc mode
  int num_lambda = 100;
  double lambda_min_ratio = 0.01;
  ScreenMode mode = ScreenMode::none;
  // Solve the nonnegative-lasso family instead of SGL; implied by dpc mode,
  // needed explicitly for its unscreened reference run.
  bool nonneg = false;
  SolveConfig solve;
  double zero_threshold = 1e-8;
  double eps_safe_scale = 1e-9;
  bool keep_zero_masks = true;
  // Aligned run (same grid, usually mode none) used to fill r1/r2 and to
  // audit screening safety.
  const PathRunResult* reference = nullptr;
  int threads = 1;  // independent alpha sweeps may run concurrently
};

/// The paper's seven default alpha values, tan(5,15,30,45,60,75,85 degrees).
std::vector<double> default_alphas();

/// Sequential screen-then-solve sweep over the log-spaced lambda grid,
/// one sweep per alpha (a single sweep for dpc mode).
PathRunResult run_path(const ProblemData& data, const PathConfig& config);

/// CSV with fixed column order and shortest round-trip float formatting.
std::string emit_report_csv(const std::vector<PathRecord>& records);

/// JSON mirror of the CSV with "schema_version": 1.
std::string emit_report_json(const std::vector<PathRecord>& records);

/// Parses emit_report_csv output; throws on malformed input.
std::vector<PathRecord> parse_report_csv(const std::string& text);

}  // namespace sgl
