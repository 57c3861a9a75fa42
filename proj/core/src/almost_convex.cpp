#include "hfopt/almost_convex.hpp"

#include "hfopt/agd.hpp"

#include <cmath>
#include <sstream>

namespace hfopt {

double acagd_inner_accuracy(double eps, double gamma, double l1) {
  return eps * std::sqrt(gamma / (50.0 * (l1 + 2.0 * gamma)));
}

AlmostConvexResult almost_convex_agd(Oracle& f, const Vector& z1, double eps, double gamma,
                                     double l1, const AcagdOptions& opts) {
  if (!(eps > 0.0)) throw std::invalid_argument("acagd: eps must be positive");
  if (!(gamma > 0.0 && gamma <= l1)) throw std::invalid_argument("acagd: need 0 < gamma <= l1");

  const long start_grad = f.counters().grad_calls;
  const double outer_bound = 1.0 + 5.0 * gamma * std::max(opts.delta_f, 0.0) / (eps * eps);
  const long outer_cap = static_cast<long>(std::ceil(opts.outer_cap_safety * outer_bound)) + 1;

  const double eps_inner = acagd_inner_accuracy(eps, gamma, l1);
  const double l_inner =
      opts.inner_smoothness == InnerSmoothness::l1_plus_2gamma ? l1 + 2.0 * gamma : l1;

  Vector z = z1;
  const double start_value = f.value(z1);
  double f_z = start_value;

  for (long j = 1;; ++j) {
    if (opts.step_trace) opts.step_trace->push_back({z, f_z, 0});
    const Vector grad = f.grad(z);
    if (grad.norm() <= eps) {
      AlmostConvexResult res;
      res.z = z;
      res.outer_iterations = j;
      res.inner_grad_cost = f.counters().grad_calls - start_grad;
      res.start_value = start_value;
      res.end_value = f_z;
      return res;
    }
    if (j > outer_cap) {
      std::ostringstream tr;
      tr << "acagd outer cap " << outer_cap << " exceeded; |grad|=" << grad.norm()
         << " target " << eps << " (gamma=" << gamma << ", delta_f=" << opts.delta_f << ")";
      throw NonConvergenceError("acagd failed to converge within the outer cap", tr.str());
    }

    ProxOracle g(f, z, gamma);
    AgdOptions inner;
    // g_j(z_j) = f(z_j); the regulariser is nonnegative, so inf g_j is
    // bounded below by inf f.
    inner.delta_g = std::max(f_z - opts.f_lower_bound, eps * eps / l1);
    inner.cap_safety = opts.inner_cap_safety;
    AgdResult step = accelerated_gradient_descent(g, z, eps_inner, l_inner, gamma, inner);
    z = step.y;
    f_z = f.value(z);
    if (opts.step_trace) opts.step_trace->back().inner_iterations = step.iterations;
  }
}

}  // namespace hfopt
