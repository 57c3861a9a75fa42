// Acceptance battery: one pass/fail line per criterion, pinned
// tolerances, exit code = number of failed criteria. Dense-Hessian
// verification is used here only as a referee, never charged to the
// algorithms.

#include <hfopt/agd.hpp>
#include <hfopt/almost_convex.hpp>
#include <hfopt/bench.hpp>
#include <hfopt/curvature.hpp>
#include <hfopt/driver.hpp>
#include <hfopt/eigensolver.hpp>
#include <hfopt/problems.hpp>
#include <hfopt/rng.hpp>
#include <hfopt/trace.hpp>

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace hfopt;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& title,
               const std::function<std::string()>& body) {
  std::string detail;
  try {
    detail = body();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const bool ok = detail.empty();
  if (!ok) ++g_failures;
  std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, title.c_str(),
              ok ? "" : " — ", detail.c_str());
  std::fflush(stdout);
}

const std::vector<std::string> kSuiteIds = {"quadratic:d=50:kappa=100", "ncquadratic:d=20",
                                            "doublewell:d=20", "rosenbrock:d=2", "randnc:d=50"};

double dense_min_eig(const TestProblem& p, const Vector& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(p.dense_hessian(x));
  return es.eigenvalues().minCoeff();
}

struct LinFit {
  double slope, intercept, r2;
};

LinFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
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
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - intercept - slope * x[i];
    ss_res += r * r;
  }
  return {slope, intercept, syy > 0 ? 1.0 - ss_res / syy : 1.0};
}

}  // namespace

int main() {
  criterion(1, "stationarity: |grad f(x)| <= eps on every suite problem, < 1 min per run",
            []() -> std::string {
    for (const std::string& id : kSuiteIds) {
      for (double eps : {1e-2, 1e-3, 1e-4}) {
        TestProblem p = make_problem(id, 1);
        SolverConfig cfg;
        cfg.eps = eps;
        cfg.seed = 1;
        const auto t0 = std::chrono::steady_clock::now();
        RunReport r = accelerated_nonconvex(*p.oracle, p.start, p.params, cfg);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (p.oracle->grad(r.x).norm() > eps)
          return id + " eps=" + format_double(eps) + ": |grad| = " + format_double(r.grad_norm);
        if (secs >= 60.0)
          return id + " eps=" + format_double(eps) + ": " + format_double(secs) + " s";
      }
    }
    return "";
  });

  criterion(2, "second-order certificate holds in >= 90% of 50 seeded runs per problem",
            []() -> std::string {
    const double eps = 1e-3, delta = 0.1;
    for (const std::string& id : {std::string("ncquadratic:d=20"), std::string("doublewell:d=20")}) {
      int ok = 0;
      for (int s = 1; s <= 50; ++s) {
        TestProblem p = make_problem(id, 1);  // fixed instance, varying solver seed
        SolverConfig cfg;
        cfg.eps = eps;
        cfg.delta = delta;
        cfg.seed = std::uint64_t(s);
        RunReport r = accelerated_nonconvex(*p.oracle, p.start, p.params, cfg);
        const double lam = dense_min_eig(p, r.x);
        if (lam >= -2.0 * std::sqrt(eps * p.params.l2) - 1e-8) ++ok;
        if (id == "doublewell:d=20" && lam <= 0.0)
          return "double-well run landed on a non-minimum (lambda_min = " +
                 format_double(lam) + ")";
      }
      if (ok < 45) return id + ": certificate in only " + std::to_string(ok) + "/50 runs";
    }
    return "";
  });

  criterion(3, "curvature descent: per-step decrease >= a^3/(12 L2^2) and step-count bound",
            []() -> std::string {
    for (const std::string& id : {std::string("ncquadratic:d=20"), std::string("doublewell:d=20")}) {
      for (int s = 1; s <= 10; ++s) {
        TestProblem p = make_problem(id, std::uint64_t(s));
        const double alpha = 0.5;
        NcdOptions opts;
        opts.seed = std::uint64_t(100 + s);
        std::vector<NcdStepRecord> steps;
        opts.step_trace = &steps;
        NcdResult r = negative_curvature_descent(*p.oracle, p.start, p.params.l2, alpha,
                                                 p.params.delta_f, 0.1, p.params.l1, opts);
        const double min_dec = alpha * alpha * alpha / (12.0 * p.params.l2 * p.params.l2);
        for (const NcdStepRecord& st : steps)
          if (st.f_before - st.f_after < min_dec - 1e-10)
            return id + ": step decrease " + format_double(st.f_before - st.f_after) +
                   " below " + format_double(min_dec);
        const double step_bound =
            1.0 + 12.0 * p.params.l2 * p.params.l2 * p.params.delta_f / (alpha * alpha * alpha);
        if (double(r.steps_taken) > step_bound)
          return id + ": " + std::to_string(r.steps_taken) + " steps exceeds bound";
      }
    }
    return "";
  });

  criterion(4, "almost-convex outer-iteration bound and per-step proximal descent",
            []() -> std::string {
    for (int d : {10, 20}) {
      TestProblem p = make_problem("ncquadratic:d=" + std::to_string(d), 3);
      const double gamma = 0.5;  // the Hessian is bounded below by -0.5 I globally
      for (double eps : {1e-2, 1e-3}) {
        TestProblem fresh = make_problem("ncquadratic:d=" + std::to_string(d), 3);
        AcagdOptions opts;
        opts.delta_f = fresh.params.delta_f;
        opts.f_lower_bound = fresh.oracle->value(fresh.start) - fresh.params.delta_f;
        std::vector<AcagdStep> steps;
        opts.step_trace = &steps;
        AlmostConvexResult r =
            almost_convex_agd(*fresh.oracle, fresh.start, eps, gamma, fresh.params.l1, opts);
        if (double(r.outer_iterations) >
            1.0 + 5.0 * gamma * fresh.params.delta_f / (eps * eps))
          return "outer iterations " + std::to_string(r.outer_iterations) + " exceed the bound";
        for (size_t j = 0; j + 1 < steps.size(); ++j) {
          const double drop = gamma * (steps[j + 1].z - steps[j].z).squaredNorm();
          if (steps[j + 1].f_value > steps[j].f_value - drop + 1e-10)
            return "proximal descent violated at outer step " + std::to_string(j);
        }
      }
      (void)p;
    }
    return "";
  });

  criterion(5, "strongly convex agd: iteration bound and geometric decay, kappa in {10,100,1000}",
            []() -> std::string {
    for (double kappa : {10.0, 100.0, 1000.0}) {
      std::ostringstream id;
      id << "quadratic:d=50:kappa=" << long(kappa);
      TestProblem p = make_problem(id.str(), 2);
      const double l1 = p.params.l1, sigma1 = l1 / kappa, eps = 1e-10;
      AgdOptions opts;
      opts.delta_g = p.params.delta_f;
      std::vector<double> values;
      opts.value_trace = &values;
      AgdResult r = accelerated_gradient_descent(*p.oracle, p.start, eps, l1, sigma1, opts);
      const double bound =
          1.0 + std::sqrt(kappa) *
                    std::log(4.0 * l1 * l1 * p.params.delta_f / (sigma1 * eps * eps));
      if (double(r.iterations) > bound)
        return id.str() + ": " + std::to_string(r.iterations) + " iterations > bound " +
               format_double(bound);
      const double ratio_bound = 1.1 * (1.0 - std::sqrt(1.0 / kappa));
      for (size_t j = 0; j + 10 < values.size(); ++j) {
        if (values[j + 10] <= 1e-13 * values[0]) break;  // machine-precision floor
        const double per_iter = std::pow(values[j + 10] / values[j], 0.1);
        if (per_iter > ratio_bound)
          return id.str() + ": window decay " + format_double(per_iter) + " > " +
                 format_double(ratio_bound);
      }
    }
    return "";
  });

  criterion(6, "eigensolver accuracy over 200 random operators; lanczos cheaper than power",
            []() -> std::string {
    Rng rng(6006);
    const int d = 20;
    const double l1 = 3.0, delta = 0.1, eps_add = 0.05;
    int failures = 0;
    for (int t = 0; t < 200; ++t) {
      Matrix g(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
      Eigen::HouseholderQR<Matrix> qr(g);
      Matrix q = qr.householderQ();
      Vector lam(d);
      for (int i = 0; i < d; ++i) lam[i] = rng.uniform(-3.0, 3.0);
      Matrix a = q * lam.asDiagonal() * q.transpose();
      FunctionOracle f(
          d, [&a](const Vector& x) { return 0.5 * x.dot(a * x); },
          [&a](const Vector& x) { return Vector(a * x); },
          [&a](const Vector&, const Vector& v) { return Vector(a * v); });
      EigenEstimate lz = min_eigvec_lanczos(f, Vector::Zero(d), eps_add, delta, l1, 9000 + t);
      Eigen::SelfAdjointEigenSolver<Matrix> es(a);
      if (lz.rayleigh > es.eigenvalues().minCoeff() + eps_add) ++failures;
      EigenEstimate lz2 =
          min_eigvec_lanczos(f, Vector::Zero(d), 0.01 * l1, delta, l1, 9000 + t);
      EigenEstimate pw = min_eigvec_power(f, Vector::Zero(d), 0.01 * l1, delta, l1, 9000 + t);
      if (lz2.hvp_cost >= pw.hvp_cost)
        return "instance " + std::to_string(t) + ": lanczos cost " +
               std::to_string(lz2.hvp_cost) + " >= power cost " + std::to_string(pw.hvp_cost);
    }
    if (failures > int(delta * 200))
      return std::to_string(failures) + "/200 additive-accuracy failures";
    return "";
  });

  criterion(7, "scaling separation: accnc slope <= 1.9 < gd slope >= 1.8 on the random suite",
            []() -> std::string {
    BenchConfig cfg;
    cfg.problems = {"randnc:d=50"};
    cfg.solvers = {"accnc", "gd"};
    cfg.eps = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    cfg.seeds = {1, 2, 3, 4, 5};
    cfg.out_dir = (fs::temp_directory_path() / "hfopt-acceptance-scaling").string();
    fs::remove_all(cfg.out_dir);
    BenchOutcome out = run_benchmark(cfg);
    if (!out.all_succeeded) return "some sweep runs failed";
    double accnc_slope = 0.0, gd_slope = 0.0;
    for (const FitResult& f : fit_scaling(out.summary))
      (f.solver == "accnc" ? accnc_slope : gd_slope) = f.slope;
    std::ostringstream detail;
    detail << "accnc " << accnc_slope << ", gd " << gd_slope;
    if (accnc_slope > 1.9) return "accnc slope too steep: " + detail.str();
    if (gd_slope < 1.8) return "gd slope too shallow: " + detail.str();
    if (accnc_slope >= gd_slope) return "no separation: " + detail.str();
    return "";
  });

  criterion(8, "strict-saddle: distance/value bounds at known minimizers, log-linear phase 2",
            []() -> std::string {
    std::vector<double> log_inv_eps, phase2_calls;
    for (double eps : {3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5}) {
      TestProblem p = make_problem("doublewell:d=6", 11);
      const double sigma1 = *p.sigma1;
      SolverConfig cfg;
      cfg.eps = eps;
      cfg.seed = 11;
      RunReport r = strict_saddle(*p.oracle, p.start, p.params, sigma1, cfg);
      double best = std::numeric_limits<double>::infinity();
      double best_val = 0.0;
      for (const Vector& m : p.known_minimizers) {
        const double dist = (r.x - m).norm();
        if (dist < best) {
          best = dist;
          best_val = p.oracle->value(m);
        }
      }
      if (best > 2.0 * eps / sigma1)
        return "eps=" + format_double(eps) + ": distance " + format_double(best) + " > " +
               format_double(2.0 * eps / sigma1);
      if (p.oracle->value(r.x) - best_val >
          2.0 * p.params.l1 * eps * eps / (sigma1 * sigma1))
        return "eps=" + format_double(eps) + ": value gap above the bound";
      long phase2 = 0;
      long before_grad = 0, before_hvp = 0;
      for (const PhaseRecord& ph : r.phase_trace) {
        if (ph.phase == "agd-phase2")
          phase2 = (ph.cum_grad_calls - before_grad) + 2 * (ph.cum_hvp_calls - before_hvp);
        else {
          before_grad = ph.cum_grad_calls;
          before_hvp = ph.cum_hvp_calls;
        }
      }
      if (phase2 <= 0) return "eps=" + format_double(eps) + ": no phase-2 record";
      log_inv_eps.push_back(std::log(1.0 / eps));
      phase2_calls.push_back(double(phase2));
    }
    const LinFit fit = fit_line(log_inv_eps, phase2_calls);
    if (fit.r2 < 0.9)
      return "phase-2 calls vs log(1/eps): R^2 = " + format_double(fit.r2);
    if (fit.slope <= 0.0) return "phase-2 cost does not grow with log(1/eps)";
    return "";
  });

  criterion(9, "penalty: midpoint convexity, finite-difference gradient, hessian-action bounds",
            []() -> std::string {
    Rng rng(909);
    const double l1 = 2.0, l2 = 1.5, alpha = 0.5, radius = alpha / l2;
    for (int t = 0; t < 1000; ++t) {
      const int d = 2 + int(rng.uniform() * 6.0);
      const Vector x = 2.0 * rng.normal_vector(d), y = 2.0 * rng.normal_vector(d);
      const double lam = rng.uniform();
      const double mid = rho_alpha(lam * x + (1.0 - lam) * y, alpha, l1, l2).first;
      const double chord = lam * rho_alpha(x, alpha, l1, l2).first +
                           (1.0 - lam) * rho_alpha(y, alpha, l1, l2).first;
      if (mid > chord + 1e-10)
        return "midpoint convexity violated by " + format_double(mid - chord);
    }
    for (int t = 0; t < 100; ++t) {
      const Vector x = (radius + 0.2 + 2.0 * rng.uniform()) * rng.unit_sphere(5);
      const auto [value, grad] = rho_alpha(x, alpha, l1, l2);
      (void)value;
      const double h = 1e-6;
      for (int i = 0; i < 5; ++i) {
        const Vector e = Vector::Unit(5, i);
        const double fd = (rho_alpha(x + h * e, alpha, l1, l2).first -
                           rho_alpha(x - h * e, alpha, l1, l2).first) /
                          (2.0 * h);
        if (std::abs(fd - grad[i]) > 1e-6 * std::max(1.0, std::abs(grad[i])))
          return "gradient component differs from finite differences";
      }
      // hessian action via a central difference of the gradient, away from
      // the hinge radius
      const Vector u = rng.unit_sphere(5);
      const Vector gp = rho_alpha(x + h * u, alpha, l1, l2).second;
      const Vector gm = rho_alpha(x - h * u, alpha, l1, l2).second;
      const double action = u.dot(gp - gm) / (2.0 * h);
      if (action < -1e-6 || action > 4.0 * l1 + 1e-6)
        return "hessian action " + format_double(action) + " outside [0, 4 L1]";
    }
    return "";
  });

  criterion(10, "determinism: identical config and seed reproduce traces byte for byte",
            []() -> std::string {
    BenchConfig cfg;
    cfg.problems = {"doublewell:d=10", "randnc:d=20"};
    cfg.solvers = {"accnc", "strict-saddle"};
    cfg.eps = {1e-3};
    cfg.seeds = {21};
    BenchConfig cfg2 = cfg;
    cfg.out_dir = (fs::temp_directory_path() / "hfopt-acceptance-det-a").string();
    cfg2.out_dir = (fs::temp_directory_path() / "hfopt-acceptance-det-b").string();
    fs::remove_all(cfg.out_dir);
    fs::remove_all(cfg2.out_dir);
    run_benchmark(cfg);
    run_benchmark(cfg2);
    for (const auto& e : fs::directory_iterator(cfg.out_dir)) {
      std::ifstream a(e.path(), std::ios::binary);
      std::ifstream b(fs::path(cfg2.out_dir) / e.path().filename(), std::ios::binary);
      if (!b) return e.path().filename().string() + " missing in repeat";
      const std::string sa((std::istreambuf_iterator<char>(a)), {});
      const std::string sb((std::istreambuf_iterator<char>(b)), {});
      if (sa != sb) return e.path().filename().string() + " differs between repeats";
    }
    return "";
  });

  std::printf("%s: %d criterion failure(s)\n", g_failures ? "FAIL" : "PASS", g_failures);
  return g_failures;
}
