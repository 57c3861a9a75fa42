#include "hfopt/driver.hpp"

#include "hfopt/agd.hpp"
#include "hfopt/rng.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace hfopt {

std::pair<double, Vector> rho_alpha(const Vector& x, double alpha, double l1, double l2) {
  const double radius = alpha / l2;
  const double norm = x.norm();
  const double excess = norm - radius;
  if (excess <= 0.0 || norm == 0.0)
    return {0.0, Vector::Zero(x.size())};
  return {l1 * excess * excess, 2.0 * l1 * excess / norm * x};
}

double choose_alpha(double eps, double l1, double l2, double delta_f) {
  return std::min(l1, std::max(eps * eps / delta_f, std::sqrt(eps * l2)));
}

double HingePenaltyOracle::eval_value(const Vector& x) const {
  const double excess = std::max((x - center_).norm() - radius_, 0.0);
  return base_.value(x) + l1_ * excess * excess;
}

Vector HingePenaltyOracle::eval_grad(const Vector& x) const {
  Vector g = base_.grad(x);
  const Vector dx = x - center_;
  const double norm = dx.norm();
  const double excess = norm - radius_;
  if (excess > 0.0 && norm > 0.0) g += 2.0 * l1_ * excess / norm * dx;
  return g;
}

Vector HingePenaltyOracle::eval_hvp(const Vector& x, const Vector& v) const {
  Vector p = base_.hvp(x, v);
  const Vector dx = x - center_;
  const double norm = dx.norm();
  if (norm > radius_) {
    // Hessian of the penalty: 2 L1 [ (1 - r/|dx|) I + r dx dx' / |dx|^3 ].
    p += 2.0 * l1_ * ((1.0 - radius_ / norm) * v +
                      radius_ * dx.dot(v) / (norm * norm * norm) * dx);
  }
  return p;
}

namespace {

struct RunScope {
  Oracle& f;
  OracleCounters start;
  std::chrono::steady_clock::time_point t0;

  explicit RunScope(Oracle& oracle)
      : f(oracle), start(oracle.counters()), t0(std::chrono::steady_clock::now()) {}

  long cum_grad() const { return f.counters().grad_calls - start.grad_calls; }
  long cum_hvp() const { return f.counters().hvp_calls - start.hvp_calls; }
  void finish(RunReport& report) const {
    report.grad_calls = cum_grad();
    report.hvp_calls = cum_hvp();
    report.wallclock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void check_guard(const std::function<bool(const Vector&)>& guard, const Vector& x,
                 const char* where) {
  if (guard && !guard(x))
    throw DomainViolationError(std::string("iterate left the certified domain during ") + where);
}

}  // namespace

RunReport accelerated_nonconvex(Oracle& f, const Vector& x1, const SmoothnessParams& params,
                                const SolverConfig& cfg) {
  if (!params.valid()) throw std::invalid_argument("accnc: invalid smoothness params");
  const double eps = cfg.eps;
  if (!(eps > 0.0)) throw std::invalid_argument("accnc: eps must be positive");
  const double alpha = cfg.alpha ? *cfg.alpha
                                 : choose_alpha(eps, params.l1, params.l2, params.delta_f);
  if (!(alpha > 0.0 && alpha <= params.l1))
    throw std::invalid_argument("accnc: alpha must lie in (0, L1]");

  const double l1 = params.l1, l2 = params.l2, delta_f = params.delta_f;
  const double k_raw =
      1.0 + delta_f * (12.0 * l2 * l2 / (alpha * alpha * alpha) +
                       std::sqrt(10.0) * l2 / (alpha * eps));
  const double big_k = std::ceil(std::min(k_raw, 1e15));
  const double delta_pp = cfg.delta / big_k;

  const bool use_ncd = alpha < l1;
  const double outer_bound = use_ncd
                                 ? 2.0 + delta_f * (12.0 * l2 * l2 / (alpha * alpha * alpha) +
                                                    std::sqrt(10.0) * l2 / (alpha * eps))
                                 : 2.0 + delta_f * 16.0 * l1 / (3.0 * eps * eps);
  const long outer_cap =
      static_cast<long>(std::ceil(std::min(cfg.outer_cap_safety * outer_bound, 2e18))) + 1;

  RunScope scope(f);
  RunReport report;
  const double f_lower = f.value(x1) - delta_f;

  Vector x = x1;
  for (long k = 1;; ++k) {
    Vector x_hat = x;
    if (use_ncd) {
      NcdOptions ncd_opts;
      ncd_opts.backend = cfg.eig_backend;
      ncd_opts.seed = derive_seed(cfg.seed, 0x4e43d000ULL + static_cast<std::uint64_t>(k));
      ncd_opts.eig_budget_constant = cfg.eig_budget_constant;
      std::vector<NcdStepRecord> steps;
      ncd_opts.step_trace = &steps;
      NcdResult ncd = negative_curvature_descent(f, x, l2, alpha, delta_f, delta_pp, l1, ncd_opts);
      x_hat = ncd.z;
      for (const NcdStepRecord& s : steps)
        report.phase_trace.push_back(
            {"ncd", k, s.f_after, std::numeric_limits<double>::quiet_NaN(), scope.cum_grad(),
             scope.cum_hvp()});
      check_guard(cfg.iterate_guard, x_hat, "ncd");
    }

    const Vector grad = f.grad(x_hat);
    const double grad_norm = grad.norm();
    report.phase_trace.push_back(
        {"acagd", k, f.value(x_hat), grad_norm, scope.cum_grad(), scope.cum_hvp()});
    if (grad_norm <= eps) {
      report.x = x_hat;
      report.grad_norm = grad_norm;
      scope.finish(report);
      return report;
    }
    if (k > outer_cap) {
      std::ostringstream tr;
      tr << "accnc outer cap " << outer_cap << " exceeded; |grad|=" << grad_norm << " target "
         << eps << " (alpha=" << alpha << ")";
      throw NonConvergenceError("accnc exceeded its outer iteration cap", tr.str());
    }

    HingePenaltyOracle fk(f, x_hat, alpha, l1, l2);
    AcagdOptions acagd_opts;
    acagd_opts.delta_f = f.value(x_hat) - f_lower;  // rho >= 0, so inf f_k >= inf f
    acagd_opts.f_lower_bound = f_lower;
    acagd_opts.inner_cap_safety = cfg.inner_cap_safety;
    acagd_opts.inner_smoothness = cfg.inner_smoothness;
    AlmostConvexResult inner =
        almost_convex_agd(fk, x_hat, eps / 2.0, 3.0 * alpha, 5.0 * l1, acagd_opts);
    x = inner.z;
    check_guard(cfg.iterate_guard, x, "acagd");
  }
}

RunReport gradient_descent_baseline(Oracle& f, const Vector& x1, double eps, double l1,
                                    double delta_f, double cap_safety,
                                    const std::function<bool(const Vector&)>& guard) {
  if (!(eps > 0.0)) throw std::invalid_argument("gd: eps must be positive");
  const double bound = 1.0 + 2.0 * l1 * std::max(delta_f, 0.0) / (eps * eps);
  const long cap = static_cast<long>(std::ceil(std::min(cap_safety * bound, 2e18))) + 1;

  RunScope scope(f);
  RunReport report;
  Vector x = x1;
  long next_record = 1;
  for (long k = 1;; ++k) {
    const Vector grad = f.grad(x);
    const double grad_norm = grad.norm();
    const bool done = grad_norm <= eps;
    if (done || k >= next_record) {
      report.phase_trace.push_back(
          {"gd", k, f.value(x), grad_norm, scope.cum_grad(), scope.cum_hvp()});
      // geometric thinning keeps trace files desk-sized on long runs
      next_record = k < 128 ? k + 1 : k + k / 64;
    }
    if (done) {
      report.x = x;
      report.grad_norm = grad_norm;
      scope.finish(report);
      return report;
    }
    if (k > cap) {
      std::ostringstream tr;
      tr << "gd cap " << cap << " exceeded; |grad|=" << grad_norm << " target " << eps;
      throw NonConvergenceError("gd exceeded its iteration cap", tr.str());
    }
    x -= grad / l1;
    check_guard(guard, x, "gd");
  }
}

RunReport strict_saddle(Oracle& f, const Vector& x1, const SmoothnessParams& params,
                        double sigma1, const SolverConfig& cfg) {
  if (!(sigma1 > 0.0)) throw std::invalid_argument("strict_saddle: sigma1 must be positive");
  const double eps = cfg.eps;
  const double eps_bar = std::max(eps, sigma1 * sigma1 / (16.0 * params.l2));

  SolverConfig phase1 = cfg;
  phase1.eps = eps_bar;
  phase1.alpha = choose_alpha(eps_bar, params.l1, params.l2, params.delta_f);

  RunScope scope(f);
  RunReport report = accelerated_nonconvex(f, x1, params, phase1);

  if (eps < eps_bar) {
    const Vector x_plus = report.x;
    // f_+ = f + L1 [ |x - x_+| - sigma1/(4 L2) ]_+^2, sigma1/2-strongly
    // convex around the local minimizer and 5 L1-smooth.
    HingePenaltyOracle f_plus(f, x_plus, sigma1 / 4.0, params.l1, params.l2);
    AgdOptions agd_opts;
    agd_opts.delta_g = params.delta_f;
    agd_opts.cap_safety = cfg.inner_cap_safety;
    AgdResult phase2 =
        accelerated_gradient_descent(f_plus, x_plus, eps, 5.0 * params.l1, sigma1 / 2.0, agd_opts);
    report.x = phase2.y;
    report.grad_norm = f.grad(report.x).norm();
    report.phase_trace.push_back({"agd-phase2", phase2.iterations, f.value(report.x),
                                  report.grad_norm, scope.cum_grad(), scope.cum_hvp()});
    check_guard(cfg.iterate_guard, report.x, "agd-phase2");
  }
  scope.finish(report);
  return report;
}

}  // namespace hfopt
