#pragma once

#include "hfopt/oracle.hpp"

#include <vector>

namespace hfopt {

struct AgdResult {
  Vector y;
  long iterations = 0;
  long grad_cost = 0;
};

struct AgdOptions {
  /// Bound on g(y1) - inf g, used for the iteration safety cap. Required:
  /// callers pass f's known minimum (or a user-supplied bound) through.
  double delta_g = 1.0;
  double cap_safety = 4.0;
  /// When non-null, receives g(y_j) for every tested iterate (one value
  /// call each, test/diagnostic use).
  std::vector<double>* value_trace = nullptr;
};

/// Nesterov's accelerated gradient descent for sigma1-strongly-convex,
/// L1-smooth g, with the gradient-norm stopping rule. The stopping test
/// evaluates the gradient at y_j; the step gradient is evaluated at z_j.
/// Both are counted. Exceeding cap_safety times the
/// 1 + sqrt(L1/sigma1) log(4 L1^2 delta_g / (sigma1 eps^2)) iteration
/// bound raises NonConvergenceError (a violated precondition).
AgdResult accelerated_gradient_descent(Oracle& g, const Vector& y1, double eps, double l1,
                                       double sigma1, const AgdOptions& opts = {});

}  // namespace hfopt
