#include "hfopt/agd.hpp"

#include <cmath>
#include <sstream>

namespace hfopt {

AgdResult accelerated_gradient_descent(Oracle& g, const Vector& y1, double eps, double l1,
                                       double sigma1, const AgdOptions& opts) {
  if (!(eps > 0.0)) throw std::invalid_argument("agd: eps must be positive");
  if (!(sigma1 > 0.0)) throw std::invalid_argument("agd: sigma1 must be positive");
  if (!(l1 >= sigma1)) throw std::invalid_argument("agd: need l1 >= sigma1");

  const long start_grad = g.counters().grad_calls;
  const double kappa = l1 / sigma1;
  const double sqrt_kappa = std::sqrt(kappa);
  const double momentum = (sqrt_kappa - 1.0) / (sqrt_kappa + 1.0);

  const double delta_g = std::max(opts.delta_g, 0.0);
  const double log_arg = 4.0 * l1 * l1 * delta_g / (sigma1 * eps * eps);
  const double bound = 1.0 + sqrt_kappa * std::log(std::max(log_arg, 1.0));
  const long cap = static_cast<long>(std::ceil(opts.cap_safety * bound)) + 1;

  Vector y = y1;
  Vector y_prev = y1;
  Vector z = y1;

  for (long j = 1;; ++j) {
    if (opts.value_trace) opts.value_trace->push_back(g.value(y));
    const Vector grad_y = g.grad(y);
    if (grad_y.norm() <= eps) {
      AgdResult res;
      res.y = y;
      res.iterations = j;
      res.grad_cost = g.counters().grad_calls - start_grad;
      return res;
    }
    if (j > cap) {
      std::ostringstream tr;
      tr << "agd cap " << cap << " exceeded; |grad|=" << grad_y.norm() << " target " << eps
         << " (kappa=" << kappa << ", delta_g=" << delta_g << ")";
      throw NonConvergenceError("agd failed to converge within the safety cap", tr.str());
    }
    const Vector grad_z = g.grad(z);
    y_prev = y;
    y = z - grad_z / l1;
    z = (1.0 + momentum) * y - momentum * y_prev;
  }
}

}  // namespace hfopt
