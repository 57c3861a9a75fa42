#include "hfopt/oracle.hpp"

#include <cmath>
#include <limits>

namespace hfopt {

double default_fd_step(const Vector& x, const Vector& v) {
  const double tiny = std::numeric_limits<double>::min();
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  return sqrt_eps * (1.0 + x.norm()) / std::max(v.norm(), tiny);
}

Vector hvp_finite_diff(Oracle& oracle, const Vector& x, const Vector& v, double h) {
  if (v.norm() <= 0.0) throw std::invalid_argument("hvp_finite_diff: direction must be nonzero");
  if (!(h > 0.0)) throw std::invalid_argument("hvp_finite_diff: step must be positive");
  Vector g1 = oracle.grad(x + h * v);
  Vector g0 = oracle.grad(x);
  return (g1 - g0) / h;
}

Vector Oracle::hvp(const Vector& x, const Vector& v) {
  check_dim(x);
  check_dim(v);
  if (has_analytic_hvp()) {
    ++counters_.hvp_calls;
    Vector p = eval_hvp(x, v);
    if (!p.allFinite()) throw NonFiniteOracleError("non-finite hvp", x);
    return p;
  }
  // Counted as two gradient calls via the grad() wrapper.
  return hvp_finite_diff(*this, x, v, default_fd_step(x, v));
}

Vector Oracle::eval_hvp(const Vector&, const Vector&) const {
  throw std::logic_error("eval_hvp called on oracle without analytic hvp");
}

}  // namespace hfopt
