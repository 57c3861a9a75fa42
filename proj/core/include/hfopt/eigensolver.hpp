#pragma once

#include "hfopt/oracle.hpp"

#include <cstdint>

namespace hfopt {

/// Approximate smallest eigenpair of the Hessian at x.
struct EigenEstimate {
  Vector v;               // unit vector
  double rayleigh = 0.0;  // v' H v, recomputed on the returned vector
  long hvp_cost = 0;      // HVP calls consumed
  double target_accuracy = 0.0;
  double failure_prob = 0.0;
  bool degraded = false;  // budget exhausted without Krylov breakdown
};

enum class EigBackend { lanczos, power };

/// Iteration-budget constant in ceil(C sqrt(L1/eps) log(d/delta)) + 1
/// (Lanczos) and ceil(C (L1/eps) log(d/delta)) (power). Overridable via
/// the solver configuration.
inline constexpr double kDefaultEigBudgetConstant = 8.0;

/// Additive eps-approximate smallest eigenvector of the Hessian of f at
/// x, via Lanczos with full reorthogonalization on the PSD operator
/// M v = L1 v - H v. With probability >= 1 - delta over the random start
/// vector, rayleigh <= lambda_min + eps_add.
EigenEstimate min_eigvec_lanczos(Oracle& f, const Vector& x, double eps_add, double delta,
                                 double l1, std::uint64_t seed,
                                 double budget_constant = kDefaultEigBudgetConstant);

/// Same contract via plain power iteration on M; budget linear in
/// L1/eps_add rather than its square root.
EigenEstimate min_eigvec_power(Oracle& f, const Vector& x, double eps_add, double delta,
                               double l1, std::uint64_t seed,
                               double budget_constant = kDefaultEigBudgetConstant);

EigenEstimate min_eigvec(EigBackend backend, Oracle& f, const Vector& x, double eps_add,
                         double delta, double l1, std::uint64_t seed,
                         double budget_constant = kDefaultEigBudgetConstant);

}  // namespace hfopt
