#pragma once

#include "hfopt/eigensolver.hpp"
#include "hfopt/oracle.hpp"

#include <cstdint>
#include <vector>

namespace hfopt {

struct NcdStepRecord {
  double rayleigh;       // v' H v at the step, recomputed
  double step_length;    // 2 |rayleigh| / L2
  double dir_grad;       // v' grad f(z) before the step
  double f_before;
  double f_after;
};

struct NcdOptions {
  EigBackend backend = EigBackend::lanczos;
  std::uint64_t seed = 0;
  double cap_safety = 2.0;
  double eig_budget_constant = kDefaultEigBudgetConstant;
  std::vector<NcdStepRecord>* step_trace = nullptr;
};

struct NcdResult {
  Vector z;
  long steps_taken = 0;  // j - 1
  long eig_calls = 0;
  double total_decrease = 0.0;  // f(z1) - f(z)
  bool certified = false;       // final eigenvector test passed
  bool degraded = false;        // some eigen estimate was flagged degraded
};

/// Negative-curvature descent: estimate the smallest Hessian eigenvector
/// at additive accuracy alpha/2 and per-call failure probability
/// delta' = delta / (1 + 12 L2^2 delta_f / alpha^3); while the Rayleigh
/// quotient is <= -alpha/2, step by 2|v'Hv|/L2 along -sign(v'grad f) v.
/// On certified return, lambda_min(H) >= -alpha with probability 1-delta.
/// Every accepted step decreases f by at least alpha^3 / (12 L2^2).
NcdResult negative_curvature_descent(Oracle& f, const Vector& z1, double l2, double alpha,
                                     double delta_f, double delta, double l1,
                                     const NcdOptions& opts = {});

}  // namespace hfopt
