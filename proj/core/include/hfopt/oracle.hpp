#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace hfopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Smoothness constants consumed by every iteration bound: gradient
/// Lipschitz constant l1, Hessian Lipschitz constant l2, and an upper
/// bound delta_f on f(start) - inf f.
struct SmoothnessParams {
  double l1 = 0.0;
  double l2 = 0.0;
  double delta_f = 0.0;

  bool valid() const {
    return std::isfinite(l1) && l1 > 0.0 && std::isfinite(l2) && l2 > 0.0 &&
           std::isfinite(delta_f) && delta_f > 0.0;
  }
};

struct OracleCounters {
  long value_calls = 0;
  long grad_calls = 0;
  long hvp_calls = 0;

  long total() const { return grad_calls + hvp_calls; }
};

/// Thrown when an oracle evaluation produces a NaN or infinity. Carries
/// the offending point.
class NonFiniteOracleError : public std::runtime_error {
 public:
  NonFiniteOracleError(std::string what, Vector at)
      : std::runtime_error(std::move(what)), at_(std::move(at)) {}
  const Vector& at() const { return at_; }

 private:
  Vector at_;
};

/// Thrown when an iteration safety cap is exceeded, signalling a violated
/// precondition (wrong L1/L2/delta_f or a function outside the assumed
/// class). Carries a short trace description.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(std::string what, std::string trace = {})
      : std::runtime_error(std::move(what)), trace_(std::move(trace)) {}
  const std::string& trace() const { return trace_; }

 private:
  std::string trace_;
};

/// Raised by the benchmark layer on malformed configuration, before any
/// run starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Objective abstraction: value, gradient and Hessian-vector product,
/// with per-call accounting. Evaluation is pure; the counters are the
/// only mutable state, so one oracle instance serves one solver run.
///
/// A subclass may provide an analytic HVP; otherwise hvp() falls back to
/// the forward-difference approximation, charged as two gradient calls.
class Oracle {
 public:
  explicit Oracle(int dim) : dim_(dim) {
    if (dim <= 0) throw std::invalid_argument("oracle dimension must be positive");
  }
  virtual ~Oracle() = default;

  int dim() const { return dim_; }

  double value(const Vector& x) {
    check_dim(x);
    ++counters_.value_calls;
    double v = eval_value(x);
    if (!std::isfinite(v)) throw NonFiniteOracleError("non-finite objective value", x);
    return v;
  }

  Vector grad(const Vector& x) {
    check_dim(x);
    ++counters_.grad_calls;
    Vector g = eval_grad(x);
    if (!g.allFinite()) throw NonFiniteOracleError("non-finite gradient", x);
    return g;
  }

  Vector hvp(const Vector& x, const Vector& v);

  const OracleCounters& counters() const { return counters_; }
  void reset_counters() { counters_ = OracleCounters{}; }

  virtual bool has_analytic_hvp() const { return false; }

 protected:
  virtual double eval_value(const Vector& x) const = 0;
  virtual Vector eval_grad(const Vector& x) const = 0;
  virtual Vector eval_hvp(const Vector& x, const Vector& v) const;

  void check_dim(const Vector& x) const {
    if (x.size() != dim_) throw std::invalid_argument("dimension mismatch");
  }

 private:
  int dim_;
  OracleCounters counters_;
};

/// Forward-difference Hessian-vector product,
///   p = (grad(x + h v) - grad(x)) / h,
/// with error at most h * L2 * |v|^2 / 2. Charges two gradient calls on
/// the supplied oracle.
Vector hvp_finite_diff(Oracle& oracle, const Vector& x, const Vector& v, double h);

/// Default step balancing truncation against cancellation.
double default_fd_step(const Vector& x, const Vector& v);

/// Oracle assembled from callables; used for composed objectives and in
/// tests.
class FunctionOracle : public Oracle {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradFn = std::function<Vector(const Vector&)>;
  using HvpFn = std::function<Vector(const Vector&, const Vector&)>;

  FunctionOracle(int dim, ValueFn value, GradFn grad, HvpFn hvp = nullptr)
      : Oracle(dim), value_(std::move(value)), grad_(std::move(grad)), hvp_(std::move(hvp)) {}

  bool has_analytic_hvp() const override { return static_cast<bool>(hvp_); }

 protected:
  double eval_value(const Vector& x) const override { return value_(x); }
  Vector eval_grad(const Vector& x) const override { return grad_(x); }
  Vector eval_hvp(const Vector& x, const Vector& v) const override { return hvp_(x, v); }

 private:
  ValueFn value_;
  GradFn grad_;
  HvpFn hvp_;
};

/// f(z) + gamma * |z - center|^2. The proximal model minimized by the
/// almost-convex outer loop. Gradient and HVP add the regulariser
/// analytically, so each composed gradient charges exactly one base
/// gradient call.
class ProxOracle : public Oracle {
 public:
  ProxOracle(Oracle& base, Vector center, double gamma)
      : Oracle(base.dim()), base_(base), center_(std::move(center)), gamma_(gamma) {}

  bool has_analytic_hvp() const override { return base_.has_analytic_hvp(); }

 protected:
  double eval_value(const Vector& x) const override {
    return base_.value(x) + gamma_ * (x - center_).squaredNorm();
  }
  Vector eval_grad(const Vector& x) const override {
    return base_.grad(x) + 2.0 * gamma_ * (x - center_);
  }
  Vector eval_hvp(const Vector& x, const Vector& v) const override {
    return base_.hvp(x, v) + 2.0 * gamma_ * v;
  }

 private:
  Oracle& base_;
  Vector center_;
  double gamma_;
};

}  // namespace hfopt
