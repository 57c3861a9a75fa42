#include "hfopt/curvature.hpp"

#include "hfopt/rng.hpp"

#include <cmath>
#include <sstream>

namespace hfopt {

NcdResult negative_curvature_descent(Oracle& f, const Vector& z1, double l2, double alpha,
                                     double delta_f, double delta, double l1,
                                     const NcdOptions& opts) {
  if (!(alpha > 0.0)) throw std::invalid_argument("ncd: alpha must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("ncd: delta must lie in (0,1)");
  if (!(l2 > 0.0)) throw std::invalid_argument("ncd: l2 must be positive");

  const double step_bound = 1.0 + 12.0 * l2 * l2 * std::max(delta_f, 0.0) / (alpha * alpha * alpha);
  const double delta_prime = delta / step_bound;
  const long cap = static_cast<long>(std::ceil(opts.cap_safety * step_bound)) + 1;

  NcdResult res;
  res.z = z1;
  double f_z = f.value(z1);
  const double f_start = f_z;

  for (long j = 1;; ++j) {
    EigenEstimate est = min_eigvec(opts.backend, f, res.z, alpha / 2.0, delta_prime, l1,
                                   derive_seed(opts.seed, static_cast<std::uint64_t>(j)),
                                   opts.eig_budget_constant);
    ++res.eig_calls;
    res.degraded = res.degraded || est.degraded;
    // One extra HVP on the returned vector rather than trusting the
    // solver's internal value; counted.
    const double rayleigh = est.v.dot(f.hvp(res.z, est.v));

    if (rayleigh > -alpha / 2.0) {
      res.certified = true;
      res.steps_taken = j - 1;
      res.total_decrease = f_start - f_z;
      return res;
    }
    if (j > cap) {
      std::ostringstream tr;
      tr << "ncd step cap " << cap << " exceeded (alpha=" << alpha << ", L2=" << l2
         << ", delta_f=" << delta_f << "): L2 or delta_f likely misestimated";
      throw NonConvergenceError("ncd exceeded its step cap", tr.str());
    }

    const double dir_grad = est.v.dot(f.grad(res.z));
    const double sign = dir_grad >= 0.0 ? 1.0 : -1.0;  // sign(0) := +1
    const double step_length = 2.0 * std::abs(rayleigh) / l2;
    res.z -= step_length * sign * est.v;
    const double f_next = f.value(res.z);
    if (opts.step_trace)
      opts.step_trace->push_back({rayleigh, step_length, dir_grad, f_z, f_next});
    f_z = f_next;
  }
}

}  // namespace hfopt
