#pragma once

#include "hfopt/trace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hfopt {

/// Run-matrix description. Parsed from a flat `key = value` file
/// (lists comma-separated, '#' comments); every field can be overridden
/// from the command line.
struct BenchConfig {
  std::vector<std::string> problems;
  std::vector<std::string> solvers;  // accnc | gd | ncd-only | acagd-only | strict-saddle
  std::vector<double> eps;
  double delta = 0.1;
  std::vector<std::uint64_t> seeds = {1};
  std::string out_dir = "bench-out";
  std::string format = "csv";  // csv | json
  bool dense_check = true;     // dense second-order verification where available

  /// Throws ConfigError on empty problem/solver/eps lists, duplicate
  /// seeds, unknown solver or problem ids, or a bad format.
  void validate() const;
};

BenchConfig parse_bench_config(const std::string& path);

struct RunResult {
  std::string problem;
  std::string solver;
  double eps = 0.0;
  std::uint64_t seed = 0;
  bool success = false;
  bool cert_checked = false;
  bool cert_ok = false;
  double grad_norm = 0.0;
  double min_hessian_eig = 0.0;  // meaningful only when cert_checked
  long grad_calls = 0;
  long hvp_calls = 0;
  double wallclock_sec = 0.0;
  std::string error;
  std::string trace_path;

  /// One Hessian-vector product is charged as two gradient evaluations,
  /// matching the finite-difference realisation.
  long total_calls() const { return grad_calls + 2 * hvp_calls; }
};

struct SummaryRow {
  std::string problem;
  std::string solver;
  double eps = 0.0;
  int runs = 0;
  int successes = 0;
  double success_rate = 0.0;
  double cert_rate = 0.0;  // NaN when the certificate was never checked
  double mean_calls = 0.0;
  double median_calls = 0.0;
  double slope = 0.0;  // per problem x solver, over the eps sweep; NaN if < 2 eps
};

struct BenchOutcome {
  std::vector<RunResult> runs;
  std::vector<SummaryRow> summary;
  std::string summary_path;
  bool all_succeeded = false;
};

/// Executes the full problem x solver x eps x seed matrix, writing one
/// trace file per run and one summary table. Individual run failures are
/// recorded in the summary and never abort the batch.
BenchOutcome run_benchmark(const BenchConfig& cfg);

std::vector<SummaryRow> read_summary(const std::string& path);

struct FitResult {
  std::string problem;
  std::string solver;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double ci_halfwidth = 0.0;  // 2 x standard error of the slope
  int points = 0;
};

/// OLS of log(median calls) on log(1/eps), one fit per problem x solver
/// group. Refuses (ConfigError) unless every group has >= 4 eps values
/// spanning >= 1.5 decades.
std::vector<FitResult> fit_scaling(const std::vector<SummaryRow>& rows);

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast invariant battery: gradient and Hessian-vector consistency on the
/// built-in suite, solver contracts on small instances, penalty convexity,
/// eigensolver accuracy against a dense reference, and determinism.
std::vector<VerifyCheck> run_verify(std::uint64_t seed = 1234);

}  // namespace hfopt
