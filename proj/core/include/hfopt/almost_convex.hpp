#pragma once

#include "hfopt/oracle.hpp"

#include <vector>

namespace hfopt {

/// Which smoothness constant the inner AGD receives for the proximal
/// subproblem g_j = f + gamma |z - z_j|^2. The pseudo-code passes L1; the
/// analysis uses the true L1 + 2 gamma smoothness of g_j. Both options
/// exist; the conservative one is the default.
enum class InnerSmoothness { l1, l1_plus_2gamma };

struct AcagdStep {
  Vector z;
  double f_value;
  long inner_iterations;
};

struct AcagdOptions {
  double delta_f = 1.0;  // bound on f(z1) - inf f, for the outer cap
  /// Lower bound on inf f, used to cap the inner AGD (the quadratic
  /// regulariser is nonnegative, so it is also a lower bound for g_j).
  double f_lower_bound = 0.0;
  double outer_cap_safety = 4.0;
  double inner_cap_safety = 4.0;
  InnerSmoothness inner_smoothness = InnerSmoothness::l1_plus_2gamma;
  /// When non-null, receives (z_j, f(z_j)) for every outer iterate
  /// including the first and the returned one.
  std::vector<AcagdStep>* step_trace = nullptr;
};

struct AlmostConvexResult {
  Vector z;
  long outer_iterations = 0;  // j at termination
  long inner_grad_cost = 0;
  double start_value = 0.0;
  double end_value = 0.0;
};

/// Stationary point of a gamma-almost-convex f by repeated AGD solves of
/// the regularised proximal subproblems, to inner accuracy
/// eps' = eps sqrt(gamma / (50 (L1 + 2 gamma))). Returns z with
/// |grad f(z)| <= eps; at most 1 + 5 gamma delta_f / eps^2 outer
/// iterations (cap = outer_cap_safety times that).
AlmostConvexResult almost_convex_agd(Oracle& f, const Vector& z1, double eps, double gamma,
                                     double l1, const AcagdOptions& opts = {});

/// The inner accuracy wiring, exposed for verification.
double acagd_inner_accuracy(double eps, double gamma, double l1);

}  // namespace hfopt
