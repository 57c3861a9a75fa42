#include "hfopt/problems.hpp"

#include "hfopt/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace hfopt {

bool TestProblem::has_tag(const std::string& t) const {
  return std::find(tags.begin(), tags.end(), t) != tags.end();
}

namespace {

Matrix random_orthogonal(Rng& rng, int d) {
  Matrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;  // fix signs for determinism
  return q;
}

class QuadraticOracle : public Oracle {
 public:
  QuadraticOracle(Matrix a) : Oracle(static_cast<int>(a.rows())), a_(std::move(a)) {}
  bool has_analytic_hvp() const override { return true; }
  const Matrix& matrix() const { return a_; }

 protected:
  double eval_value(const Vector& x) const override { return 0.5 * x.dot(a_ * x); }
  Vector eval_grad(const Vector& x) const override { return a_ * x; }
  Vector eval_hvp(const Vector&, const Vector& v) const override { return a_ * v; }

 private:
  Matrix a_;
};

// 0.5 x'Ax + (q/4)|x|^4: one negative eigenvalue of A gives a saddle at
// the origin; the quartic term keeps the function bounded below.
class ConfinedQuadraticOracle : public Oracle {
 public:
  ConfinedQuadraticOracle(Matrix a, double q)
      : Oracle(static_cast<int>(a.rows())), a_(std::move(a)), q_(q) {}
  bool has_analytic_hvp() const override { return true; }

  Matrix dense_hessian(const Vector& x) const {
    Matrix h = a_ + q_ * x.squaredNorm() * Matrix::Identity(dim(), dim());
    h += 2.0 * q_ * x * x.transpose();
    return h;
  }

 protected:
  double eval_value(const Vector& x) const override {
    double n2 = x.squaredNorm();
    return 0.5 * x.dot(a_ * x) + 0.25 * q_ * n2 * n2;
  }
  Vector eval_grad(const Vector& x) const override {
    return a_ * x + q_ * x.squaredNorm() * x;
  }
  Vector eval_hvp(const Vector& x, const Vector& v) const override {
    return a_ * v + q_ * (x.squaredNorm() * v + 2.0 * x.dot(v) * x);
  }

 private:
  Matrix a_;
  double q_;
};

// sum_i (x_i^2 - 1)^2 + (c/2) sum_i (x_i - x_{i+1})^2
class DoubleWellOracle : public Oracle {
 public:
  DoubleWellOracle(int d, double c) : Oracle(d), c_(c) {}
  bool has_analytic_hvp() const override { return true; }

  Matrix dense_hessian(const Vector& x) const {
    const int d = dim();
    Matrix h = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) h(i, i) = 12.0 * x[i] * x[i] - 4.0;
    for (int i = 0; i + 1 < d; ++i) {
      h(i, i) += c_;
      h(i + 1, i + 1) += c_;
      h(i, i + 1) -= c_;
      h(i + 1, i) -= c_;
    }
    return h;
  }

 protected:
  double eval_value(const Vector& x) const override {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
      double t = x[i] * x[i] - 1.0;
      s += t * t;
    }
    for (int i = 0; i + 1 < dim(); ++i) {
      double dxi = x[i] - x[i + 1];
      s += 0.5 * c_ * dxi * dxi;
    }
    return s;
  }
  Vector eval_grad(const Vector& x) const override {
    const int d = dim();
    Vector g(d);
    for (int i = 0; i < d; ++i) g[i] = 4.0 * x[i] * (x[i] * x[i] - 1.0);
    for (int i = 0; i + 1 < d; ++i) {
      double dxi = c_ * (x[i] - x[i + 1]);
      g[i] += dxi;
      g[i + 1] -= dxi;
    }
    return g;
  }
  Vector eval_hvp(const Vector& x, const Vector& v) const override {
    const int d = dim();
    Vector p(d);
    for (int i = 0; i < d; ++i) p[i] = (12.0 * x[i] * x[i] - 4.0) * v[i];
    for (int i = 0; i + 1 < d; ++i) {
      double dvi = c_ * (v[i] - v[i + 1]);
      p[i] += dvi;
      p[i + 1] -= dvi;
    }
    return p;
  }

 private:
  double c_;
};

// Chained Rosenbrock.
class RosenbrockOracle : public Oracle {
 public:
  explicit RosenbrockOracle(int d) : Oracle(d) {}
  bool has_analytic_hvp() const override { return true; }

  Matrix dense_hessian(const Vector& x) const {
    const int d = dim();
    Matrix h = Matrix::Zero(d, d);
    for (int i = 0; i + 1 < d; ++i) {
      h(i, i) += 1200.0 * x[i] * x[i] - 400.0 * x[i + 1] + 2.0;
      h(i + 1, i + 1) += 200.0;
      h(i, i + 1) += -400.0 * x[i];
      h(i + 1, i) += -400.0 * x[i];
    }
    return h;
  }

 protected:
  double eval_value(const Vector& x) const override {
    double s = 0.0;
    for (int i = 0; i + 1 < dim(); ++i) {
      double a = x[i + 1] - x[i] * x[i];
      double b = 1.0 - x[i];
      s += 100.0 * a * a + b * b;
    }
    return s;
  }
  Vector eval_grad(const Vector& x) const override {
    const int d = dim();
    Vector g = Vector::Zero(d);
    for (int i = 0; i + 1 < d; ++i) {
      double a = x[i + 1] - x[i] * x[i];
      g[i] += -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
      g[i + 1] += 200.0 * a;
    }
    return g;
  }
  Vector eval_hvp(const Vector& x, const Vector& v) const override {
    return dense_hessian(x) * v;
  }
};

// One-dimensional profile used by the random non-convex family: a
// logarithmic descent valley whose gradient decays like 1/(1+s), capped
// by a quadratic basin so the function is bounded below.
//
//   s < 0      : c (-s + s^2/2)
//   0 <= s <= S: -c log(1+s)
//   s > S      : quadratic continuation with minimum at s = 2S+1
struct ValleyProfile {
  double c;
  double cap;  // S

  double value(double s) const {
    if (s < 0.0) return c * (-s + 0.5 * s * s);
    if (s <= cap) return -c * std::log1p(s);
    const double u = s - cap, w = 1.0 + cap;
    return c * (-std::log1p(cap) - u / w + 0.5 * u * u / (w * w));
  }
  double deriv(double s) const {
    if (s < 0.0) return c * (-1.0 + s);
    if (s <= cap) return -c / (1.0 + s);
    const double u = s - cap, w = 1.0 + cap;
    return c * (-1.0 / w + u / (w * w));
  }
  double second(double s) const {
    if (s < 0.0) return c;
    if (s <= cap) return c / ((1.0 + s) * (1.0 + s));
    const double w = 1.0 + cap;
    return c / (w * w);
  }
  double min_value() const { return c * (-std::log1p(cap) - 0.5); }
};

// f(x) = valley(w'(x-x0)) + 0.5 (x-x0)'P(x-x0) + beta * sum cos(x_i + phi_i),
// with P supported on the orthogonal complement of w. Certified globally:
// L1 = |P| + c + beta, L2 = 2c + beta.
class ValleyOracle : public Oracle {
 public:
  ValleyOracle(ValleyProfile profile, Vector w, Vector x0, Matrix p, double beta, Vector phases)
      : Oracle(static_cast<int>(w.size())),
        profile_(profile),
        w_(std::move(w)),
        x0_(std::move(x0)),
        p_(std::move(p)),
        beta_(beta),
        phases_(std::move(phases)) {}
  bool has_analytic_hvp() const override { return true; }

  Matrix dense_hessian(const Vector& x) const {
    const double s = w_.dot(x - x0_);
    Matrix h = p_ + profile_.second(s) * w_ * w_.transpose();
    for (int i = 0; i < dim(); ++i) h(i, i) -= beta_ * std::cos(x[i] + phases_[i]);
    return h;
  }

 protected:
  double eval_value(const Vector& x) const override {
    const Vector dx = x - x0_;
    const double s = w_.dot(dx);
    double v = profile_.value(s) + 0.5 * dx.dot(p_ * dx);
    for (int i = 0; i < dim(); ++i) v += beta_ * std::cos(x[i] + phases_[i]);
    return v;
  }
  Vector eval_grad(const Vector& x) const override {
    const Vector dx = x - x0_;
    const double s = w_.dot(dx);
    Vector g = profile_.deriv(s) * w_ + p_ * dx;
    for (int i = 0; i < dim(); ++i) g[i] -= beta_ * std::sin(x[i] + phases_[i]);
    return g;
  }
  Vector eval_hvp(const Vector& x, const Vector& v) const override {
    const double s = w_.dot(x - x0_);
    Vector p = profile_.second(s) * w_.dot(v) * w_ + p_ * v;
    for (int i = 0; i < dim(); ++i) p[i] -= beta_ * std::cos(x[i] + phases_[i]) * v[i];
    return p;
  }

 private:
  ValleyProfile profile_;
  Vector w_;
  Vector x0_;
  Matrix p_;
  double beta_;
  Vector phases_;
};

struct ParsedId {
  std::string family;
  std::map<std::string, double> kv;
};

ParsedId parse_id(const std::string& id) {
  ParsedId out;
  std::stringstream ss(id);
  std::string tok;
  bool first = true;
  while (std::getline(ss, tok, ':')) {
    if (first) {
      out.family = tok;
      first = false;
      continue;
    }
    auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw ConfigError("malformed problem id token '" + tok + "' in '" + id + "'");
    try {
      out.kv[tok.substr(0, eq)] = std::stod(tok.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad numeric value in problem id '" + id + "'");
    }
  }
  if (out.family.empty()) throw ConfigError("empty problem id");
  return out;
}

double get_param(const ParsedId& p, const std::string& key, double def) {
  auto it = p.kv.find(key);
  return it == p.kv.end() ? def : it->second;
}

std::string canonical_id(const std::string& family, std::initializer_list<std::pair<std::string, double>> kv) {
  std::ostringstream ss;
  ss << family;
  for (const auto& [k, v] : kv) {
    ss << ':' << k << '=';
    if (v == std::floor(v) && std::abs(v) < 1e15)
      ss << static_cast<long long>(v);
    else
      ss << v;
  }
  return ss.str();
}

TestProblem make_convex_quadratic(int d, double kappa, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x71));
  const double big = 1.0, small = big / kappa;
  Vector lambda(d);
  lambda[0] = small;
  lambda[d - 1] = big;
  for (int i = 1; i + 1 < d; ++i) lambda[i] = rng.uniform(small, big);
  Matrix q = random_orthogonal(rng, d);
  Matrix a = q * lambda.asDiagonal() * q.transpose();
  a = 0.5 * (a + a.transpose());  // keep symmetric to roundoff

  auto oracle = std::make_shared<QuadraticOracle>(a);
  TestProblem tp;
  tp.id = canonical_id("quadratic", {{"d", double(d)}, {"kappa", kappa}});
  tp.oracle = oracle;
  tp.start = 2.0 * rng.unit_sphere(d);
  tp.known_minimum = 0.0;
  tp.lower_bound = 0.0;
  tp.known_minimizers = {Vector::Zero(d)};
  // Constant Hessian: any positive L2 is valid; a small one keeps the
  // curvature threshold alpha small.
  tp.params = SmoothnessParams{big, 0.1, 0.0};
  tp.params.delta_f = 0.5 * tp.start.dot(a * tp.start);
  tp.dense_hessian = [a](const Vector&) { return a; };
  tp.in_box = [](const Vector&) { return true; };
  tp.box_desc = "global";
  tp.tags = {"convex", "quadratic"};
  return tp;
}

TestProblem make_nonconvex_quadratic(int d, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x72));
  const double neg = 0.5;  // magnitude of the single negative eigenvalue
  const double q4 = 0.5;   // quartic confinement
  Vector lambda(d);
  lambda[0] = -neg;
  for (int i = 1; i < d; ++i) lambda[i] = rng.uniform(0.5, 1.0);
  Matrix rot = random_orthogonal(rng, d);
  Matrix a = rot * lambda.asDiagonal() * rot.transpose();
  a = 0.5 * (a + a.transpose());
  Vector neg_dir = rot.col(0);

  auto oracle = std::make_shared<ConfinedQuadraticOracle>(a, q4);
  const double radius = 3.0;

  TestProblem tp;
  tp.id = canonical_id("ncquadratic", {{"d", double(d)}});
  tp.oracle = oracle;
  tp.start = 0.1 * rng.unit_sphere(d);
  tp.known_minimum = -neg * neg / (4.0 * q4);
  tp.lower_bound = tp.known_minimum;
  const double r = std::sqrt(neg / q4);
  tp.known_minimizers = {r * neg_dir, -r * neg_dir};
  // On |x| <= radius: |H| <= |A| + 3 q |x|^2, Hessian Lipschitz 6 q radius.
  tp.params = SmoothnessParams{1.0 + 3.0 * q4 * radius * radius, 6.0 * q4 * radius, 0.0};
  tp.params.delta_f = oracle->value(tp.start) - *tp.lower_bound;
  oracle->reset_counters();
  auto raw = oracle.get();
  tp.dense_hessian = [raw](const Vector& x) { return raw->dense_hessian(x); };
  tp.in_box = [radius](const Vector& x) { return x.norm() <= radius; };
  tp.box_desc = "|x|_2 <= 3";
  tp.tags = {"nonconvex"};
  return tp;
}

TestProblem make_double_well(int d, double c, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x73));
  auto oracle = std::make_shared<DoubleWellOracle>(d, c);
  const double radius = 2.0;  // sup-norm box

  TestProblem tp;
  tp.id = c == 0.0 ? canonical_id("doublewell", {{"d", double(d)}})
                   : canonical_id("doublewell", {{"d", double(d)}, {"c", c}});
  tp.oracle = oracle;
  tp.start = Vector::Zero(d);
  for (int i = 0; i < d; ++i) tp.start[i] = 0.1 * rng.normal();
  tp.known_minimum = 0.0;
  tp.lower_bound = 0.0;
  if (c == 0.0 && d <= 10) {
    // Every sign vector is an exact local (and global) minimizer.
    for (int mask = 0; mask < (1 << d); ++mask) {
      Vector m(d);
      for (int i = 0; i < d; ++i) m[i] = (mask >> i) & 1 ? 1.0 : -1.0;
      tp.known_minimizers.push_back(m);
    }
  } else {
    tp.known_minimizers = {Vector::Ones(d), -Vector::Ones(d)};
  }
  // On |x|_inf <= 2: diag curvature in [-4, 44], coupling adds at most 4c;
  // Hessian Lipschitz 24 * radius in the Euclidean norm.
  tp.params = SmoothnessParams{12.0 * radius * radius - 4.0 + 4.0 * c, 24.0 * radius, 0.0};
  tp.params.delta_f = oracle->value(tp.start);
  oracle->reset_counters();
  auto raw = oracle.get();
  tp.dense_hessian = [raw](const Vector& x) { return raw->dense_hessian(x); };
  tp.in_box = [radius](const Vector& x) { return x.lpNorm<Eigen::Infinity>() <= radius; };
  tp.box_desc = "|x|_inf <= 2";
  tp.tags = {"nonconvex", "strict-saddle"};
  if (c == 0.0) tp.sigma1 = 3.0;
  return tp;
}

TestProblem make_rosenbrock(int d, std::uint64_t /*seed*/) {
  auto oracle = std::make_shared<RosenbrockOracle>(d);
  const double radius = 2.5;

  TestProblem tp;
  tp.id = canonical_id("rosenbrock", {{"d", double(d)}});
  tp.oracle = oracle;
  tp.start = Vector::Ones(d);
  tp.start[0] = -1.2;  // classic start
  tp.known_minimum = 0.0;
  tp.lower_bound = 0.0;
  tp.known_minimizers = {Vector::Ones(d)};
  // Gershgorin on |x|_inf <= radius for L1; row-sum Hessian difference
  // bound for L2. Conservative upper bounds are valid certificates.
  const double l1 = 1200.0 * radius * radius + 1200.0 * radius + 202.0;
  const double l2 = 2400.0 * radius + 1200.0;
  tp.params = SmoothnessParams{l1, l2, 0.0};
  tp.params.delta_f = oracle->value(tp.start);
  oracle->reset_counters();
  auto raw = oracle.get();
  tp.dense_hessian = [raw](const Vector& x) { return raw->dense_hessian(x); };
  tp.in_box = [radius](const Vector& x) { return x.lpNorm<Eigen::Infinity>() <= radius; };
  tp.box_desc = "|x|_inf <= 2.5";
  tp.tags = {"nonconvex"};
  return tp;
}

TestProblem make_random_nonconvex(int d, std::uint64_t seed) {
  if (d < 2) throw ConfigError("randnc requires d >= 2");
  Rng rng(derive_seed(seed, 0x75));
  ValleyProfile profile{0.02, 300.0};
  const double beta = 1e-5;

  Vector w = rng.unit_sphere(d);
  // Orthonormal complement basis via a random rotation whose first column
  // is replaced by w, then re-orthogonalized.
  Matrix basis = random_orthogonal(rng, d);
  basis.col(0) = w;
  Eigen::HouseholderQR<Matrix> qr(basis);
  Matrix q = qr.householderQ();
  if (q.col(0).dot(w) < 0) q.col(0) *= -1.0;
  Matrix p = Matrix::Zero(d, d);
  for (int j = 1; j < d; ++j) {
    const double lam = rng.uniform(0.05, 1.0);
    p += lam * q.col(j) * q.col(j).transpose();
  }
  p = 0.5 * (p + p.transpose());
  Vector x0 = 2.0 * rng.unit_sphere(d);
  Vector phases(d);
  for (int i = 0; i < d; ++i) phases[i] = rng.uniform(0.0, 2.0 * M_PI);

  auto oracle = std::make_shared<ValleyOracle>(profile, w, x0, p, beta, phases);
  TestProblem tp;
  tp.id = canonical_id("randnc", {{"d", double(d)}});
  tp.oracle = oracle;
  tp.start = x0;
  tp.lower_bound = profile.min_value() - beta * d;
  tp.params = SmoothnessParams{1.0 + profile.c + beta, 2.0 * profile.c + beta, 0.0};
  tp.params.delta_f = oracle->value(tp.start) - *tp.lower_bound;
  oracle->reset_counters();
  auto raw = oracle.get();
  tp.dense_hessian = [raw](const Vector& x) { return raw->dense_hessian(x); };
  tp.in_box = [](const Vector& x) { return x.allFinite(); };
  tp.box_desc = "global";
  tp.tags = {"nonconvex", "random"};
  return tp;
}

}  // namespace

TestProblem make_problem(const std::string& id, std::uint64_t seed) {
  ParsedId p = parse_id(id);
  const int d = static_cast<int>(get_param(p, "d", 0));
  if (p.family == "quadratic") {
    if (d <= 0) throw ConfigError("quadratic: missing or bad d");
    return make_convex_quadratic(d, get_param(p, "kappa", 100.0), seed);
  }
  if (p.family == "ncquadratic") {
    if (d <= 0) throw ConfigError("ncquadratic: missing or bad d");
    return make_nonconvex_quadratic(d, seed);
  }
  if (p.family == "doublewell") {
    if (d <= 0) throw ConfigError("doublewell: missing or bad d");
    return make_double_well(d, get_param(p, "c", 0.0), seed);
  }
  if (p.family == "rosenbrock") {
    if (d < 2) throw ConfigError("rosenbrock: d must be >= 2");
    return make_rosenbrock(d, seed);
  }
  if (p.family == "randnc") {
    if (d <= 0) throw ConfigError("randnc: missing or bad d");
    return make_random_nonconvex(d, seed);
  }
  throw ConfigError("unknown problem family '" + p.family + "'");
}

std::vector<TestProblem> make_test_suite(std::uint64_t seed) {
  std::vector<TestProblem> suite;
  suite.push_back(make_problem("quadratic:d=50:kappa=100", seed));
  suite.push_back(make_problem("ncquadratic:d=20", seed));
  suite.push_back(make_problem("doublewell:d=20", seed));
  suite.push_back(make_problem("rosenbrock:d=2", seed));
  suite.push_back(make_problem("randnc:d=50", seed));
  return suite;
}

}  // namespace hfopt
