#pragma once

#include "hfopt/almost_convex.hpp"
#include "hfopt/curvature.hpp"
#include "hfopt/eigensolver.hpp"
#include "hfopt/oracle.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hfopt {

/// Raised when an iterate leaves the domain on which the smoothness
/// constants were certified (the run is reported, never clipped).
class DomainViolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  double eps = 1e-4;
  double delta = 0.1;
  std::optional<double> alpha;  // default: choose_alpha
  std::uint64_t seed = 0;
  double outer_cap_safety = 2.0;
  double inner_cap_safety = 4.0;
  EigBackend eig_backend = EigBackend::lanczos;
  InnerSmoothness inner_smoothness = InnerSmoothness::l1_plus_2gamma;
  double eig_budget_constant = kDefaultEigBudgetConstant;
  /// Certified-domain guard; a false return aborts the run with
  /// DomainViolationError.
  std::function<bool(const Vector&)> iterate_guard;
};

struct PhaseRecord {
  std::string phase;  // ncd | acagd | agd-phase2 | gd
  long iteration = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  long cum_grad_calls = 0;
  long cum_hvp_calls = 0;
};

struct RunReport {
  Vector x;
  double grad_norm = 0.0;
  std::optional<double> min_hessian_eig;  // filled by test harnesses only
  std::vector<PhaseRecord> phase_trace;
  long grad_calls = 0;
  long hvp_calls = 0;
  double wallclock_sec = 0.0;
};

/// Convex hinge penalty L1 [ |x| - alpha/L2 ]_+^2 and its gradient
/// (zero inside the hinge radius).
std::pair<double, Vector> rho_alpha(const Vector& x, double alpha, double l1, double l2);

/// Curvature threshold min{L1, max{eps^2/delta_f, sqrt(eps L2)}}.
double choose_alpha(double eps, double l1, double l2, double delta_f);

/// f(x) + rho_alpha(x - center): globally almost convex when the Hessian
/// at center is bounded below by -alpha. 5 L1-smooth.
class HingePenaltyOracle : public Oracle {
 public:
  HingePenaltyOracle(Oracle& base, Vector center, double alpha, double l1, double l2)
      : Oracle(base.dim()),
        base_(base),
        center_(std::move(center)),
        radius_(alpha / l2),
        l1_(l1) {}

  bool has_analytic_hvp() const override { return base_.has_analytic_hvp(); }

 protected:
  double eval_value(const Vector& x) const override;
  Vector eval_grad(const Vector& x) const override;
  Vector eval_hvp(const Vector& x, const Vector& v) const override;

 private:
  Oracle& base_;
  Vector center_;
  double radius_;
  double l1_;
};

/// The combined method: negative-curvature descent to an almost-convex
/// region, then AGD on the hinge-penalised proximal objective, until
/// |grad f| <= eps. Returned x additionally satisfies
/// lambda_min(Hessian) >= -2 alpha with probability 1 - delta.
RunReport accelerated_nonconvex(Oracle& f, const Vector& x1, const SmoothnessParams& params,
                                const SolverConfig& cfg);

/// Fixed-step 1/L1 gradient descent to |grad f| <= eps (the comparison
/// baseline; iteration cap 1 + 2 L1 delta_f / eps^2, safety-scaled).
RunReport gradient_descent_baseline(Oracle& f, const Vector& x1, double eps, double l1,
                                    double delta_f, double cap_safety = 2.0,
                                    const std::function<bool(const Vector&)>& guard = nullptr);

/// Two-phase method for sigma1-strict-saddle functions: the combined
/// method at accuracy max{eps, sigma1^2/(16 L2)}, then AGD on a
/// hinge-penalised strongly convex localisation. Linear convergence in
/// eps in phase two.
RunReport strict_saddle(Oracle& f, const Vector& x1, const SmoothnessParams& params,
                        double sigma1, const SolverConfig& cfg);

}  // namespace hfopt
