#pragma once

#include "hfopt/oracle.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hfopt {

/// A benchmark objective bundled with certified smoothness constants and
/// whatever ground truth is available. dense_hessian is verification-only
/// and never enters algorithm cost accounting.
struct TestProblem {
  std::string id;
  std::shared_ptr<Oracle> oracle;
  SmoothnessParams params;             // l1, l2 certified on the stated box; delta_f at `start`
  Vector start;
  std::optional<double> known_minimum; // exact inf f, when known
  std::optional<double> lower_bound;   // bound on inf f (always set; = known_minimum when exact)
  std::vector<Vector> known_minimizers;
  std::function<Matrix(const Vector&)> dense_hessian;
  std::function<bool(const Vector&)> in_box;  // domain on which l1/l2 are certified
  std::string box_desc;
  std::vector<std::string> tags;              // convex / nonconvex / strict-saddle
  std::optional<double> sigma1;               // strict-saddle parameter, when certified

  bool has_tag(const std::string& t) const;

  /// delta_f consistent with the module contract: f(start) - known lower bound.
  double delta_f() const { return params.delta_f; }
};

/// Construct a problem from a string id, e.g. "quadratic:d=50:kappa=100",
/// "ncquadratic:d=20", "doublewell:d=20", "doublewell:d=10:c=0.1",
/// "rosenbrock:d=2", "randnc:d=50". Unknown families or malformed
/// parameters raise ConfigError.
TestProblem make_problem(const std::string& id, std::uint64_t seed);

/// The built-in suite: convex quadratic, non-convex quadratic (one
/// negative eigenvalue, quartic-confined), separable double-well,
/// Rosenbrock, and a random smooth non-convex problem. Identical seeds
/// give bitwise-identical parameters.
std::vector<TestProblem> make_test_suite(std::uint64_t seed);

}  // namespace hfopt
