#pragma once

#include <hfopt/oracle.hpp>
#include <hfopt/problems.hpp>
#include <hfopt/rng.hpp>

#include <Eigen/Dense>

#include <memory>

namespace testutil {

/// f(x) = 1/2 x'Ax with analytic gradient and HVP.
inline std::shared_ptr<hfopt::FunctionOracle> quadratic_oracle(const hfopt::Matrix& A) {
  return std::make_shared<hfopt::FunctionOracle>(
      static_cast<int>(A.rows()),
      [A](const hfopt::Vector& x) { return 0.5 * x.dot(A * x); },
      [A](const hfopt::Vector& x) { return hfopt::Vector(A * x); },
      [A](const hfopt::Vector&, const hfopt::Vector& v) { return hfopt::Vector(A * v); });
}

/// Symmetric matrix with eigenvalues drawn uniformly in [lo, hi].
inline hfopt::Matrix random_symmetric(int d, double lo, double hi, hfopt::Rng& rng) {
  hfopt::Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<hfopt::Matrix> qr(g);
  hfopt::Matrix q = qr.householderQ();
  hfopt::Vector lam(d);
  for (int i = 0; i < d; ++i) lam[i] = rng.uniform(lo, hi);
  return q * lam.asDiagonal() * q.transpose();
}

/// Random point near the problem's start, rejected until inside the box
/// the smoothness constants are certified on.
inline hfopt::Vector sample_in_box(const hfopt::TestProblem& p, hfopt::Rng& rng,
                                   double radius = 0.3) {
  for (int tries = 0; tries < 200; ++tries) {
    hfopt::Vector x = p.start + radius * rng.normal_vector(p.start.size());
    if (!p.in_box || p.in_box(x)) return x;
  }
  return p.start;
}

}  // namespace testutil
