// `bench` — run the solver benchmark matrix, fit scaling exponents, or
// run the invariant battery. Exit codes: 0 full success, 1 failed runs
// or failed checks, 2 configuration errors.

#include <hfopt/bench.hpp>
#include <hfopt/oracle.hpp>
#include <hfopt/trace.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

int cmd_run(const std::string& config_path, const std::vector<std::string>& problems,
            const std::vector<std::string>& solvers, const std::vector<double>& eps,
            const std::vector<std::uint64_t>& seeds, const std::string& out_dir,
            const std::string& format, double delta, bool delta_set) {
  hfopt::BenchConfig cfg;
  if (!config_path.empty()) cfg = hfopt::parse_bench_config(config_path);
  if (!problems.empty()) cfg.problems = problems;
  if (!solvers.empty()) cfg.solvers = solvers;
  if (!eps.empty()) cfg.eps = eps;
  if (!seeds.empty()) cfg.seeds = seeds;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (!format.empty()) cfg.format = format;
  if (delta_set) cfg.delta = delta;
  cfg.validate();

  hfopt::BenchOutcome out = hfopt::run_benchmark(cfg);
  std::printf("%-28s %-14s %-10s %5s %9s %9s %12s %12s %8s\n", "problem", "solver", "eps",
              "runs", "success", "cert", "mean_calls", "med_calls", "slope");
  for (const hfopt::SummaryRow& r : out.summary)
    std::printf("%-28s %-14s %-10s %5d %9.2f %9.2f %12.0f %12.0f %8.3f\n", r.problem.c_str(),
                r.solver.c_str(), hfopt::format_double(r.eps).c_str(), r.runs, r.success_rate,
                r.cert_rate, r.mean_calls, r.median_calls, r.slope);
  for (const hfopt::RunResult& r : out.runs)
    if (!r.success)
      std::printf("FAILED  %s %s eps=%s seed=%llu%s%s\n", r.problem.c_str(), r.solver.c_str(),
                  hfopt::format_double(r.eps).c_str(), (unsigned long long)r.seed,
                  r.error.empty() ? "" : ": ", r.error.c_str());
  std::printf("summary: %s (%zu runs, %s)\n", out.summary_path.c_str(), out.runs.size(),
              out.all_succeeded ? "all succeeded" : "some runs failed");
  return out.all_succeeded ? 0 : 1;
}

int cmd_fit(const std::string& summary_path) {
  std::vector<hfopt::FitResult> fits = hfopt::fit_scaling(hfopt::read_summary(summary_path));
  std::printf("%-28s %-14s %8s %12s %8s %8s %7s\n", "problem", "solver", "slope", "intercept",
              "r2", "+-", "points");
  for (const hfopt::FitResult& f : fits)
    std::printf("%-28s %-14s %8.4f %12.4f %8.5f %8.4f %7d\n", f.problem.c_str(),
                f.solver.c_str(), f.slope, f.intercept, f.r2, f.ci_halfwidth, f.points);
  return 0;
}

int cmd_verify(std::uint64_t seed) {
  std::vector<hfopt::VerifyCheck> checks = hfopt::run_verify(seed);
  bool all = true;
  for (const hfopt::VerifyCheck& c : checks) {
    std::printf("[%s] %s — %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    all = all && c.passed;
  }
  std::printf("%zu checks, %s\n", checks.size(), all ? "all passed" : "FAILURES present");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benchmark harness for the Hessian-free non-convex solver library"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format, summary_path;
  std::vector<std::string> problems, solvers;
  std::vector<double> eps;
  std::vector<std::uint64_t> seeds;
  double delta = 0.1;
  std::uint64_t verify_seed = 1234;

  CLI::App* run = app.add_subcommand("run", "execute the problem x solver x eps x seed matrix");
  run->add_option("--config", config_path, "flat key = value config file");
  run->add_option("--problems", problems, "problem ids (override the config)");
  run->add_option("--solvers", solvers, "solvers: accnc gd ncd-only acagd-only strict-saddle");
  run->add_option("--eps", eps, "target gradient norms");
  run->add_option("--seeds", seeds, "distinct RNG seeds");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json", ""}));
  CLI::Option* delta_opt = run->add_option("--delta", delta, "certificate failure probability");

  CLI::App* fit = app.add_subcommand("fit", "fit scaling exponents from a summary file");
  fit->add_option("--summary", summary_path, "summary file from a previous run")->required();

  CLI::App* verify = app.add_subcommand("verify", "run the invariant battery");
  verify->add_option("--seed", verify_seed, "battery seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, problems, solvers, eps, seeds, out_dir, format, delta,
                     delta_opt->count() > 0);
    if (fit->parsed()) return cmd_fit(summary_path);
    return cmd_verify(verify_seed);
  } catch (const hfopt::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
