#include <hfopt/oracle.hpp>
#include <hfopt/problems.hpp>
#include <hfopt/rng.hpp>

#include "helpers.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

using namespace hfopt;

TEST_CASE("counters increment by one per call; finite-difference hvp charges two gradients") {
  Matrix a = Matrix::Identity(3, 3);
  auto analytic = testutil::quadratic_oracle(a);
  const Vector x = Vector::Ones(3), v = Vector::Unit(3, 0);
  analytic->value(x);
  analytic->grad(x);
  analytic->hvp(x, v);
  CHECK(analytic->counters().value_calls == 1);
  CHECK(analytic->counters().grad_calls == 1);
  CHECK(analytic->counters().hvp_calls == 1);

  FunctionOracle fd_only(3, [a](const Vector& y) { return 0.5 * y.dot(a * y); },
                         [a](const Vector& y) { return Vector(a * y); });
  fd_only.hvp(x, v);
  CHECK(fd_only.counters().grad_calls == 2);
  CHECK(fd_only.counters().hvp_calls == 0);
}

TEST_CASE("finite-difference hvp is exact for quadratics, for every step size") {
  Rng rng(11);
  Matrix a = testutil::random_symmetric(5, -2.0, 2.0, rng);
  FunctionOracle f(5, [a](const Vector& x) { return 0.5 * x.dot(a * x); },
                   [a](const Vector& x) { return Vector(a * x); });
  const Vector x = rng.normal_vector(5), v = rng.unit_sphere(5);
  for (double h : {1e-2, 1e-5, 1e-8}) {
    const Vector p = hvp_finite_diff(f, x, v, h);
    CHECK((p - a * v).norm() <= 1e-6);
  }
}

TEST_CASE("finite-difference hvp rejects a zero direction and a non-positive step") {
  auto f = testutil::quadratic_oracle(Matrix::Identity(2, 2));
  const Vector x = Vector::Ones(2);
  CHECK_THROWS_AS(hvp_finite_diff(*f, x, Vector::Zero(2), 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(hvp_finite_diff(*f, x, Vector::Ones(2), 0.0), std::invalid_argument);
}

TEST_CASE("finite-difference hvp error bound on the 2-d Rosenbrock at (1,1)") {
  TestProblem p = make_problem("rosenbrock:d=2", 0);
  Vector x(2);
  x << 1.0, 1.0;
  Rng rng(5);
  const Vector v = rng.unit_sphere(2);
  const double h = 1e-6;
  FunctionOracle fd_only(
      2, [&](const Vector& y) { return p.oracle->value(y); },
      [&](const Vector& y) { return p.oracle->grad(y); });
  const Vector approx = hvp_finite_diff(fd_only, x, v, h);
  const Vector exact = p.dense_hessian(x) * v;
  // truncation bound h L2 |v|^2 / 2 plus cancellation slack
  CHECK((approx - exact).norm() <= h * p.params.l2 / 2.0 + 1e-3);
}

TEST_CASE("finite-difference hvp error bound on f = |x|^4/4 at e1") {
  const int d = 4;
  FunctionOracle f(
      d, [](const Vector& x) { return 0.25 * std::pow(x.squaredNorm(), 2); },
      [](const Vector& x) { return Vector(x.squaredNorm() * x); });
  const Vector x = Vector::Unit(d, 0), v = Vector::Unit(d, 0);
  const double h = 1e-4;
  const Vector p = hvp_finite_diff(f, x, v, h);
  // dense Hessian |x|^2 I + 2 x x' gives H e1 = 3 e1 here; L2 <= 6(1+h) near e1
  const Vector exact = 3.0 * Vector::Unit(d, 0);
  CHECK((p - exact).norm() <= h * 6.0 * (1.0 + h) / 2.0 + 1e-10);
}

TEST_CASE("hvp is linear in the direction for analytic oracles") {
  Rng rng(21);
  Matrix a = testutil::random_symmetric(6, -1.0, 3.0, rng);
  auto f = testutil::quadratic_oracle(a);
  const Vector x = rng.normal_vector(6), u = rng.normal_vector(6), w = rng.normal_vector(6);
  const Vector lhs = f->hvp(x, 2.0 * u - 0.5 * w);
  const Vector rhs = 2.0 * f->hvp(x, u) - 0.5 * f->hvp(x, w);
  CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
}

TEST_CASE("test suite is bitwise reproducible under a fixed seed") {
  auto a = make_test_suite(0);
  auto b = make_test_suite(0);
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() >= 5);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].params.l1 == b[i].params.l1);
    CHECK(a[i].params.l2 == b[i].params.l2);
    CHECK(a[i].params.delta_f == b[i].params.delta_f);
    CHECK(a[i].start == b[i].start);
    Rng rng(3);
    const Vector x = a[i].start + 0.1 * rng.normal_vector(a[i].start.size());
    CHECK(a[i].oracle->value(x) == b[i].oracle->value(x));
    CHECK(a[i].oracle->grad(x) == b[i].oracle->grad(x));
  }
}

TEST_CASE("convex quadratic reports its spectrum honestly") {
  TestProblem p = make_problem("quadratic:d=20:kappa=50", 3);
  Eigen::SelfAdjointEigenSolver<Matrix> es(p.dense_hessian(p.start));
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(p.params.l1).epsilon(1e-9));
  CHECK(es.eigenvalues().minCoeff() == doctest::Approx(p.params.l1 / 50.0).epsilon(1e-9));
  CHECK(p.has_tag("convex"));
}

TEST_CASE("one-dimensional double-well: stationary points and saddle curvature") {
  TestProblem p = make_problem("doublewell:d=1", 0);
  for (double s : {-1.0, 0.0, 1.0}) {
    Vector x(1);
    x << s;
    CHECK(p.oracle->grad(x).norm() <= 1e-12);
  }
  Vector origin = Vector::Zero(1);
  CHECK(p.dense_hessian(origin)(0, 0) == doctest::Approx(-4.0));
  CHECK(p.has_tag("strict-saddle"));
}

TEST_CASE("unknown problem ids and malformed parameters are rejected before any run") {
  CHECK_THROWS_AS(make_problem("nosuch:d=3", 0), ConfigError);
  CHECK_THROWS_AS(make_problem("quadratic:d=0:kappa=10", 0), ConfigError);
  CHECK_THROWS_AS(make_problem("quadratic:d=5:kappa=abc", 0), ConfigError);
}

TEST_CASE("gradients match central finite differences on 100 random pairs per problem") {
  for (const TestProblem& p : make_test_suite(7)) {
    Rng rng(101);
    Oracle& f = *p.oracle;
    for (int t = 0; t < 100; ++t) {
      const Vector x = testutil::sample_in_box(p, rng, 0.2);
      const Vector d = rng.unit_sphere(f.dim());
      const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
      const double fd = (f.value(x + h * d) - f.value(x - h * d)) / (2.0 * h);
      const double an = f.grad(x).dot(d);
      CHECK(std::abs(fd - an) <= 1e-5 * std::max(1.0, std::abs(an)));
    }
  }
}

TEST_CASE("hvp symmetry at random points") {
  for (const TestProblem& p : make_test_suite(9)) {
    if (!p.oracle->has_analytic_hvp()) continue;
    Rng rng(55);
    Oracle& f = *p.oracle;
    for (int t = 0; t < 20; ++t) {
      const Vector x = testutil::sample_in_box(p, rng, 0.2);
      const Vector u = rng.normal_vector(f.dim()), w = rng.normal_vector(f.dim());
      const double a = u.dot(f.hvp(x, w)), b = w.dot(f.hvp(x, u));
      CHECK(std::abs(a - b) <= 1e-6 * u.norm() * w.norm() * std::max(1.0, p.params.l1));
    }
  }
}

TEST_CASE("dense hessian action agrees with the hvp oracle") {
  for (const TestProblem& p : make_test_suite(13)) {
    if (!p.dense_hessian || !p.oracle->has_analytic_hvp()) continue;
    Rng rng(77);
    for (int t = 0; t < 10; ++t) {
      const Vector x = testutil::sample_in_box(p, rng, 0.2);
      const Vector v = rng.normal_vector(p.oracle->dim());
      const Vector dense = p.dense_hessian(x) * v;
      const Vector hvp = p.oracle->hvp(x, v);
      CHECK((dense - hvp).norm() <= 1e-8 * (1.0 + v.norm()) * std::max(1.0, p.params.l1));
    }
  }
}

TEST_CASE("first- and second-order smoothness certificates hold on the stated box") {
  for (const TestProblem& p : make_test_suite(17)) {
    Rng rng(31);
    Oracle& f = *p.oracle;
    for (int t = 0; t < 100; ++t) {
      const Vector x = testutil::sample_in_box(p, rng, 0.25);
      const Vector y = testutil::sample_in_box(p, rng, 0.25);
      const double gap = f.value(y) - f.value(x) - f.grad(x).dot(y - x);
      CHECK(std::abs(gap) <= 0.5 * p.params.l1 * (y - x).squaredNorm() + 1e-9);
      if (f.has_analytic_hvp()) {
        const Vector lin = f.grad(y) - f.grad(x) - f.hvp(x, y - x);
        CHECK(lin.norm() <= 0.5 * p.params.l2 * (y - x).squaredNorm() + 1e-9);
      }
    }
  }
}

TEST_CASE("non-finite oracle values raise an error carrying the offending point") {
  FunctionOracle f(
      2, [](const Vector& x) { return x[0] > 0.5 ? std::nan("") : x.squaredNorm(); },
      [](const Vector& x) { return Vector(2.0 * x); });
  Vector bad(2);
  bad << 1.0, 0.0;
  try {
    f.value(bad);
    FAIL("expected NonFiniteOracleError");
  } catch (const NonFiniteOracleError& e) {
    CHECK(e.at() == bad);
  }
}

TEST_CASE("smoothness params validity") {
  CHECK(SmoothnessParams{1.0, 1.0, 1.0}.valid());
  CHECK_FALSE(SmoothnessParams{0.0, 1.0, 1.0}.valid());
  CHECK_FALSE(SmoothnessParams{1.0, -1.0, 1.0}.valid());
  CHECK_FALSE(
      SmoothnessParams{1.0, 1.0, std::numeric_limits<double>::infinity()}.valid());
}
