#include "hfopt/bench.hpp"

#include "hfopt/agd.hpp"
#include "hfopt/almost_convex.hpp"
#include "hfopt/curvature.hpp"
#include "hfopt/driver.hpp"
#include "hfopt/eigensolver.hpp"
#include "hfopt/problems.hpp"
#include "hfopt/rng.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace hfopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string>& known_solvers() {
  static const std::set<std::string> s = {"accnc", "gd", "ncd-only", "acagd-only",
                                          "strict-saddle"};
  return s;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  for (char c : s + ",") {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  return out;
}

std::string sanitize(const std::string& id) {
  std::string out = id;
  std::replace(out.begin(), out.end(), ':', '_');
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError("cannot parse " + what + ": '" + s + "'");
  return v;
}

}  // namespace

void BenchConfig::validate() const {
  if (problems.empty()) throw ConfigError("config: problem list is empty");
  if (solvers.empty()) throw ConfigError("config: solver list is empty");
  if (eps.empty()) throw ConfigError("config: eps list is empty");
  for (double e : eps)
    if (!(e > 0.0)) throw ConfigError("config: eps values must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("config: delta must lie in (0,1)");
  if (seeds.empty()) throw ConfigError("config: seed list is empty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
    throw ConfigError("config: seeds must be distinct");
  if (format != "csv" && format != "json")
    throw ConfigError("config: format must be csv or json, got '" + format + "'");
  for (const std::string& s : solvers)
    if (!known_solvers().count(s)) throw ConfigError("config: unknown solver '" + s + "'");
  for (const std::string& p : problems) make_problem(p, seeds.front());  // throws on bad id
}

BenchConfig parse_bench_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  BenchConfig cfg;
  cfg.seeds.clear();
  std::string line;
  long line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "problems") {
      cfg.problems = split_list(value);
    } else if (key == "solvers") {
      cfg.solvers = split_list(value);
    } else if (key == "eps") {
      cfg.eps.clear();
      for (const std::string& s : split_list(value)) cfg.eps.push_back(parse_double(s, "eps"));
    } else if (key == "seeds") {
      for (const std::string& s : split_list(value))
        cfg.seeds.push_back(std::strtoull(s.c_str(), nullptr, 10));
    } else if (key == "delta") {
      cfg.delta = parse_double(value, "delta");
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "format") {
      cfg.format = value;
    } else if (key == "dense_check") {
      cfg.dense_check = value == "true" || value == "1";
    } else {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (cfg.seeds.empty()) cfg.seeds = {1};
  return cfg;
}

namespace {

RunResult execute_run(const std::string& problem_id, const std::string& solver, double eps,
                      std::uint64_t seed, const BenchConfig& cfg) {
  RunResult res;
  res.problem = problem_id;
  res.solver = solver;
  res.eps = eps;
  res.seed = seed;

  std::ostringstream run_id;
  run_id << sanitize(problem_id) << '.' << solver << ".eps" << format_double(eps) << ".seed"
         << seed;
  TraceFile trace;
  trace.seed = seed;
  trace.rng_name = Rng::kName;

  auto add_row = [&](const std::string& phase, long iteration, double f, double grad_norm,
                     long cg, long ch) {
    trace.rows.push_back(
        {run_id.str(), solver, problem_id, eps, seed, phase, iteration, f, grad_norm, cg, ch});
  };

  const auto t0 = std::chrono::steady_clock::now();
  try {
    TestProblem problem = make_problem(problem_id, seed);
    Oracle& f = *problem.oracle;
    RunReport report;
    bool have_report = false;

    if (solver == "accnc" || solver == "gd" || solver == "strict-saddle") {
      SolverConfig scfg;
      scfg.eps = eps;
      scfg.delta = cfg.delta;
      scfg.seed = seed;
      if (solver == "accnc") {
        report = accelerated_nonconvex(f, problem.start, problem.params, scfg);
      } else if (solver == "gd") {
        report = gradient_descent_baseline(f, problem.start, eps, problem.params.l1,
                                           problem.params.delta_f);
      } else {
        if (!problem.sigma1)
          throw ConfigError("problem '" + problem_id +
                            "' has no certified strict-saddle parameter");
        report = strict_saddle(f, problem.start, problem.params, *problem.sigma1, scfg);
      }
      have_report = true;
      res.success = report.grad_norm <= eps;
    } else if (solver == "acagd-only") {
      // any L1-smooth function is L1-almost convex
      AcagdOptions opts;
      opts.delta_f = problem.params.delta_f;
      opts.f_lower_bound = f.value(problem.start) - problem.params.delta_f;
      std::vector<AcagdStep> steps;
      opts.step_trace = &steps;
      AlmostConvexResult r =
          almost_convex_agd(f, problem.start, eps, problem.params.l1, problem.params.l1, opts);
      res.grad_norm = f.grad(r.z).norm();
      const auto& c = f.counters();
      long it = 0;
      for (const AcagdStep& s : steps)
        add_row("acagd", ++it, s.f_value, kNaN, c.grad_calls, c.hvp_calls);
      add_row("acagd", it + 1, r.end_value, res.grad_norm, c.grad_calls, c.hvp_calls);
      res.grad_calls = c.grad_calls;
      res.hvp_calls = c.hvp_calls;
      res.success = res.grad_norm <= eps;
    } else {  // ncd-only: drive curvature below alpha, no gradient target
      const double alpha =
          choose_alpha(eps, problem.params.l1, problem.params.l2, problem.params.delta_f);
      NcdOptions opts;
      opts.seed = seed;
      std::vector<NcdStepRecord> steps;
      opts.step_trace = &steps;
      NcdResult r = negative_curvature_descent(f, problem.start, problem.params.l2, alpha,
                                               problem.params.delta_f, cfg.delta,
                                               problem.params.l1, opts);
      res.grad_norm = f.grad(r.z).norm();
      const auto& c = f.counters();
      long it = 0;
      for (const NcdStepRecord& s : steps)
        add_row("ncd", ++it, s.f_after, kNaN, c.grad_calls, c.hvp_calls);
      add_row("ncd", it + 1, f.value(r.z), res.grad_norm, c.grad_calls, c.hvp_calls);
      res.grad_calls = c.grad_calls;
      res.hvp_calls = c.hvp_calls;
      res.success = r.certified;
      if (cfg.dense_check && problem.dense_hessian) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(problem.dense_hessian(r.z));
        res.min_hessian_eig = es.eigenvalues().minCoeff();
        res.cert_checked = true;
        res.cert_ok = res.min_hessian_eig >= -alpha - 1e-8;
      }
    }

    if (have_report) {
      for (const PhaseRecord& p : report.phase_trace)
        add_row(p.phase, p.iteration, p.f, p.grad_norm, p.cum_grad_calls, p.cum_hvp_calls);
      res.grad_norm = report.grad_norm;
      res.grad_calls = report.grad_calls;
      res.hvp_calls = report.hvp_calls;
      if (cfg.dense_check && problem.dense_hessian &&
          (solver == "accnc" || solver == "strict-saddle")) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(problem.dense_hessian(report.x));
        res.min_hessian_eig = es.eigenvalues().minCoeff();
        res.cert_checked = true;
        res.cert_ok = res.min_hessian_eig >= -2.0 * std::sqrt(eps * problem.params.l2) - 1e-8;
      }
    }
  } catch (const NonConvergenceError& e) {
    res.error = std::string(e.what()) + " | " + e.trace();
  } catch (const std::exception& e) {
    res.error = e.what();
  }
  res.wallclock_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string ext = cfg.format == "json" ? ".json" : ".csv";
  res.trace_path = (std::filesystem::path(cfg.out_dir) / (run_id.str() + ext)).string();
  if (cfg.format == "json")
    write_trace_json(res.trace_path, trace);
  else
    write_trace_csv(res.trace_path, trace);
  return res;
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Ols {
  double slope = kNaN, intercept = kNaN, r2 = kNaN, slope_se = kNaN;
};

Ols ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  Ols fit;
  const size_t n = x.size();
  if (n < 2) return fit;
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.slope_se = n > 2 ? std::sqrt(ss_res / (double(n) - 2.0) / sxx) : 0.0;
  return fit;
}

constexpr const char* kSummaryHeader =
    "problem,solver,eps,runs,successes,success_rate,cert_rate,mean_calls,median_calls,slope";

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open summary for writing: " + path);
  os << kSummaryHeader << "\n";
  for (const SummaryRow& r : rows) {
    os << r.problem << ',' << r.solver << ',' << format_double(r.eps) << ',' << r.runs << ','
       << r.successes << ',' << format_double(r.success_rate) << ','
       << format_double(r.cert_rate) << ',' << format_double(r.mean_calls) << ','
       << format_double(r.median_calls) << ',' << format_double(r.slope) << "\n";
  }
  if (!os.flush()) throw ConfigError("short write on summary: " + path);
}

void write_summary_json(const std::string& path, const std::vector<SummaryRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const SummaryRow& r : rows)
    j.push_back({{"problem", r.problem},
                 {"solver", r.solver},
                 {"eps", format_double(r.eps)},
                 {"runs", r.runs},
                 {"successes", r.successes},
                 {"success_rate", format_double(r.success_rate)},
                 {"cert_rate", format_double(r.cert_rate)},
                 {"mean_calls", format_double(r.mean_calls)},
                 {"median_calls", format_double(r.median_calls)},
                 {"slope", format_double(r.slope)}});
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open summary for writing: " + path);
  os << j.dump(1) << "\n";
  if (!os.flush()) throw ConfigError("short write on summary: " + path);
}

}  // namespace

BenchOutcome run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);

  BenchOutcome out;
  for (const std::string& problem : cfg.problems)
    for (const std::string& solver : cfg.solvers)
      for (double eps : cfg.eps)
        for (std::uint64_t seed : cfg.seeds)
          out.runs.push_back(execute_run(problem, solver, eps, seed, cfg));

  // per problem x solver x eps aggregation, config order preserved
  for (const std::string& problem : cfg.problems) {
    for (const std::string& solver : cfg.solvers) {
      std::vector<SummaryRow> group;
      for (double eps : cfg.eps) {
        SummaryRow row;
        row.problem = problem;
        row.solver = solver;
        row.eps = eps;
        std::vector<double> calls;
        int cert_checked = 0, cert_ok = 0;
        for (const RunResult& r : out.runs) {
          if (r.problem != problem || r.solver != solver || r.eps != eps) continue;
          ++row.runs;
          if (r.success) {
            ++row.successes;
            calls.push_back(double(r.total_calls()));
          }
          if (r.cert_checked) {
            ++cert_checked;
            if (r.cert_ok) ++cert_ok;
          }
        }
        row.success_rate = row.runs ? double(row.successes) / row.runs : kNaN;
        row.cert_rate = cert_checked ? double(cert_ok) / cert_checked : kNaN;
        double sum = 0;
        for (double c : calls) sum += c;
        row.mean_calls = calls.empty() ? kNaN : sum / double(calls.size());
        row.median_calls = median(calls);
        group.push_back(row);
      }
      std::vector<double> lx, ly;
      for (const SummaryRow& r : group)
        if (std::isfinite(r.median_calls) && r.median_calls > 0.0) {
          lx.push_back(std::log(1.0 / r.eps));
          ly.push_back(std::log(r.median_calls));
        }
      const double slope = ols_fit(lx, ly).slope;
      for (SummaryRow& r : group) {
        r.slope = slope;
        out.summary.push_back(r);
      }
    }
  }

  const std::string ext = cfg.format == "json" ? ".json" : ".csv";
  out.summary_path = (std::filesystem::path(cfg.out_dir) / ("summary" + ext)).string();
  if (cfg.format == "json")
    write_summary_json(out.summary_path, out.summary);
  else
    write_summary_csv(out.summary_path, out.summary);

  out.all_succeeded = true;
  for (const RunResult& r : out.runs) out.all_succeeded = out.all_succeeded && r.success;
  return out;
}

std::vector<SummaryRow> read_summary(const std::string& path) {
  std::vector<SummaryRow> rows;
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open summary: " + path);
    nlohmann::json j;
    is >> j;
    for (const auto& e : j) {
      SummaryRow r;
      r.problem = e.at("problem").get<std::string>();
      r.solver = e.at("solver").get<std::string>();
      r.eps = std::strtod(e.at("eps").get<std::string>().c_str(), nullptr);
      r.runs = e.at("runs").get<int>();
      r.successes = e.at("successes").get<int>();
      r.success_rate = std::strtod(e.at("success_rate").get<std::string>().c_str(), nullptr);
      r.cert_rate = std::strtod(e.at("cert_rate").get<std::string>().c_str(), nullptr);
      r.mean_calls = std::strtod(e.at("mean_calls").get<std::string>().c_str(), nullptr);
      r.median_calls = std::strtod(e.at("median_calls").get<std::string>().c_str(), nullptr);
      r.slope = std::strtod(e.at("slope").get<std::string>().c_str(), nullptr);
      rows.push_back(std::move(r));
    }
    return rows;
  }
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open summary: " + path);
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kSummaryHeader)
        throw ConfigError("unexpected summary header in " + path + ": " + line);
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(ls, field, ',')) f.push_back(field);
    if (f.size() != 10) throw ConfigError("malformed summary row: " + line);
    SummaryRow r;
    r.problem = f[0];
    r.solver = f[1];
    r.eps = std::strtod(f[2].c_str(), nullptr);
    r.runs = int(std::strtol(f[3].c_str(), nullptr, 10));
    r.successes = int(std::strtol(f[4].c_str(), nullptr, 10));
    r.success_rate = std::strtod(f[5].c_str(), nullptr);
    r.cert_rate = std::strtod(f[6].c_str(), nullptr);
    r.mean_calls = std::strtod(f[7].c_str(), nullptr);
    r.median_calls = std::strtod(f[8].c_str(), nullptr);
    r.slope = std::strtod(f[9].c_str(), nullptr);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<FitResult> fit_scaling(const std::vector<SummaryRow>& rows) {
  if (rows.empty()) throw ConfigError("fit: no summary rows");
  std::map<std::pair<std::string, std::string>, std::map<double, double>> groups;
  for (const SummaryRow& r : rows)
    if (std::isfinite(r.median_calls) && r.median_calls > 0.0)
      groups[{r.problem, r.solver}][r.eps] = r.median_calls;

  std::vector<FitResult> fits;
  for (const auto& [key, pts] : groups) {
    const auto& [problem, solver] = key;
    if (pts.size() < 4)
      throw ConfigError("fit: " + problem + " x " + solver + " has only " +
                        std::to_string(pts.size()) +
                        " usable eps values; need >= 4 spanning >= 1.5 decades");
    const double span = std::log10(pts.rbegin()->first / pts.begin()->first);
    if (span < 1.5)
      throw ConfigError("fit: " + problem + " x " + solver + " eps range spans only " +
                        format_double(span) + " decades; need >= 1.5");
    std::vector<double> lx, ly;
    for (const auto& [eps, calls] : pts) {
      lx.push_back(std::log(1.0 / eps));
      ly.push_back(std::log(calls));
    }
    Ols fit = ols_fit(lx, ly);
    fits.push_back({problem, solver, fit.slope, fit.intercept, fit.r2, 2.0 * fit.slope_se,
                    int(pts.size())});
  }
  return fits;
}

namespace {

struct Verifier {
  std::vector<VerifyCheck> checks;
  std::uint64_t seed;

  void record(const std::string& name, bool passed, const std::string& detail) {
    checks.push_back({name, passed, detail});
  }

  void run(const std::string& name, const std::function<std::string()>& body) {
    // body returns "" on success, a failure description otherwise
    try {
      const std::string detail = body();
      record(name, detail.empty(), detail.empty() ? "ok" : detail);
    } catch (const std::exception& e) {
      record(name, false, std::string("exception: ") + e.what());
    }
  }
};

}  // namespace

std::vector<VerifyCheck> run_verify(std::uint64_t seed) {
  Verifier v;
  v.seed = seed;
  std::vector<TestProblem> suite = make_test_suite(seed);

  v.run("gradient-matches-finite-differences", [&]() -> std::string {
    Rng rng(derive_seed(seed, 1));
    for (TestProblem& p : suite) {
      Oracle& f = *p.oracle;
      for (int trial = 0; trial < 5; ++trial) {
        const Vector x = p.start + 0.05 * rng.normal_vector(f.dim());
        const Vector d = rng.unit_sphere(f.dim());
        const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
        const double fd = (f.value(x + h * d) - f.value(x - h * d)) / (2.0 * h);
        const double an = f.grad(x).dot(d);
        if (std::abs(fd - an) > 1e-5 * std::max(1.0, std::abs(an)))
          return p.id + ": directional derivative " + format_double(an) + " vs FD " +
                 format_double(fd);
      }
    }
    return "";
  });

  v.run("hvp-symmetry", [&]() -> std::string {
    Rng rng(derive_seed(seed, 2));
    for (TestProblem& p : suite) {
      Oracle& f = *p.oracle;
      if (!f.has_analytic_hvp()) continue;
      const Vector x = p.start + 0.05 * rng.normal_vector(f.dim());
      const Vector u = rng.normal_vector(f.dim());
      const Vector w = rng.normal_vector(f.dim());
      const double a = u.dot(f.hvp(x, w)), b = w.dot(f.hvp(x, u));
      if (std::abs(a - b) > 1e-6 * std::max(1.0, std::abs(a)))
        return p.id + ": u'Hw=" + format_double(a) + " vs w'Hu=" + format_double(b);
    }
    return "";
  });

  v.run("hvp-matches-finite-differences", [&]() -> std::string {
    Rng rng(derive_seed(seed, 3));
    for (TestProblem& p : suite) {
      Oracle& f = *p.oracle;
      if (!f.has_analytic_hvp()) continue;
      const Vector x = p.start + 0.05 * rng.normal_vector(f.dim());
      const Vector u = rng.unit_sphere(f.dim());
      const Vector fd = hvp_finite_diff(f, x, u, default_fd_step(x, u));
      const Vector an = f.hvp(x, u);
      if ((fd - an).norm() > 1e-4 * std::max(1.0, an.norm()) * std::max(1.0, p.params.l2))
        return p.id + ": |hvp - fd| = " + format_double((fd - an).norm());
    }
    return "";
  });

  v.run("agd-iteration-bound", [&]() -> std::string {
    TestProblem p = make_problem("quadratic:d=50:kappa=100", seed);
    const double eps = 1e-6, l1 = p.params.l1, sigma1 = l1 / 100.0;
    AgdOptions opts;
    opts.delta_g = p.params.delta_f;
    AgdResult r = accelerated_gradient_descent(*p.oracle, p.start, eps, l1, sigma1, opts);
    const double bound =
        1.0 + std::sqrt(l1 / sigma1) *
                  std::log(4.0 * l1 * l1 * p.params.delta_f / (sigma1 * eps * eps));
    if (double(r.iterations) > bound)
      return "iterations " + std::to_string(r.iterations) + " > bound " + format_double(bound);
    if (p.oracle->grad(r.y).norm() > eps) return "returned point is not eps-stationary";
    return "";
  });

  v.run("acagd-per-step-descent", [&]() -> std::string {
    TestProblem p = make_problem("ncquadratic:d=10", seed);
    const double gamma = p.params.l1;
    AcagdOptions opts;
    opts.delta_f = p.params.delta_f;
    opts.f_lower_bound = p.oracle->value(p.start) - p.params.delta_f;
    std::vector<AcagdStep> steps;
    opts.step_trace = &steps;
    almost_convex_agd(*p.oracle, p.start, 1e-4, gamma, p.params.l1, opts);
    for (size_t j = 0; j + 1 < steps.size(); ++j) {
      const double lhs = steps[j + 1].f_value;
      const double rhs =
          steps[j].f_value - gamma * (steps[j + 1].z - steps[j].z).squaredNorm() + 1e-10;
      if (lhs > rhs) return "step " + std::to_string(j) + " violates the descent inequality";
    }
    return "";
  });

  v.run("ncd-per-step-progress", [&]() -> std::string {
    TestProblem p = make_problem("doublewell:d=10", seed);
    const double alpha = 1.0;
    NcdOptions opts;
    opts.seed = derive_seed(seed, 4);
    std::vector<NcdStepRecord> steps;
    opts.step_trace = &steps;
    NcdResult r = negative_curvature_descent(*p.oracle, p.start, p.params.l2, alpha,
                                             p.params.delta_f, 0.1, p.params.l1, opts);
    const double min_dec =
        alpha * alpha * alpha / (12.0 * p.params.l2 * p.params.l2) - 1e-10;
    for (const NcdStepRecord& s : steps)
      if (s.f_before - s.f_after < min_dec)
        return "step decrease " + format_double(s.f_before - s.f_after) + " < " +
               format_double(min_dec);
    if (!r.certified) return "terminated without the curvature certificate";
    return "";
  });

  v.run("eigensolver-vs-dense", [&]() -> std::string {
    TestProblem p = make_problem("ncquadratic:d=20", seed);
    const double eps_add = 0.01 * p.params.l1;
    EigenEstimate est = min_eigvec_lanczos(*p.oracle, p.start, eps_add, 0.05, p.params.l1,
                                           derive_seed(seed, 5));
    Eigen::SelfAdjointEigenSolver<Matrix> es(p.dense_hessian(p.start));
    const double lam = es.eigenvalues().minCoeff();
    if (est.rayleigh > lam + eps_add)
      return "rayleigh " + format_double(est.rayleigh) + " vs dense " + format_double(lam);
    return "";
  });

  v.run("penalty-convexity", [&]() -> std::string {
    Rng rng(derive_seed(seed, 6));
    const double alpha = 0.5, l1 = 2.0, l2 = 1.5;
    for (int t = 0; t < 200; ++t) {
      const Vector x = 2.0 * rng.normal_vector(5);
      const Vector y = 2.0 * rng.normal_vector(5);
      const double lam = rng.uniform();
      const double mid = rho_alpha(lam * x + (1.0 - lam) * y, alpha, l1, l2).first;
      const double chord = lam * rho_alpha(x, alpha, l1, l2).first +
                           (1.0 - lam) * rho_alpha(y, alpha, l1, l2).first;
      if (mid > chord + 1e-10) return "convexity violated by " + format_double(mid - chord);
    }
    return "";
  });

  v.run("accnc-determinism", [&]() -> std::string {
    auto one = [&]() {
      TestProblem p = make_problem("ncquadratic:d=10", seed);
      SolverConfig scfg;
      scfg.eps = 1e-3;
      scfg.seed = seed;
      return accelerated_nonconvex(*p.oracle, p.start, p.params, scfg);
    };
    RunReport a = one(), b = one();
    if (a.phase_trace.size() != b.phase_trace.size()) return "trace lengths differ";
    for (size_t i = 0; i < a.phase_trace.size(); ++i) {
      const PhaseRecord &pa = a.phase_trace[i], &pb = b.phase_trace[i];
      const bool f_same =
          pa.f == pb.f || (std::isnan(pa.f) && std::isnan(pb.f));
      const bool g_same =
          pa.grad_norm == pb.grad_norm || (std::isnan(pa.grad_norm) && std::isnan(pb.grad_norm));
      if (pa.phase != pb.phase || !f_same || !g_same ||
          pa.cum_grad_calls != pb.cum_grad_calls || pa.cum_hvp_calls != pb.cum_hvp_calls)
        return "trace row " + std::to_string(i) + " differs between repeats";
    }
    if (a.x != b.x) return "returned points differ";
    return "";
  });

  v.run("trace-roundtrip", [&]() -> std::string {
    TraceFile t;
    t.seed = seed;
    t.rng_name = Rng::kName;
    t.rows.push_back({"rt", "accnc", "quadratic:d=2:kappa=10", 1e-3, seed, "acagd", 1,
                      0.12345678901234567, 3.1e-4, 17, 5});
    t.rows.push_back({"rt", "accnc", "quadratic:d=2:kappa=10", 1e-3, seed, "ncd", 2, -1.5e-9,
                      kNaN, 20, 9});
    const auto dir = std::filesystem::temp_directory_path();
    for (const std::string ext : {".csv", ".json"}) {
      const std::string path = (dir / ("hfopt-trace-roundtrip" + ext)).string();
      if (ext == ".csv")
        write_trace_csv(path, t);
      else
        write_trace_json(path, t);
      TraceFile back = ext == ".csv" ? read_trace_csv(path) : read_trace_json(path);
      if (back.seed != t.seed || back.rng_name != t.rng_name ||
          back.rows.size() != t.rows.size())
        return ext + ": metadata or row count lost";
      for (size_t i = 0; i < t.rows.size(); ++i) {
        const TraceRow &a = t.rows[i], &b = back.rows[i];
        const bool g_same = a.grad_norm == b.grad_norm ||
                            (std::isnan(a.grad_norm) && std::isnan(b.grad_norm));
        if (a.run_id != b.run_id || a.solver != b.solver || a.problem != b.problem ||
            a.eps != b.eps || a.seed != b.seed || a.phase != b.phase ||
            a.iteration != b.iteration || a.f != b.f || !g_same ||
            a.cum_grad_calls != b.cum_grad_calls || a.cum_hvp_calls != b.cum_hvp_calls)
          return ext + ": row " + std::to_string(i) + " did not round-trip";
      }
    }
    return "";
  });

  return v.checks;
}

}  // namespace hfopt
