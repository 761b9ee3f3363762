#include "phaselab/erm.hpp"

#include <cmath>

#include "phaselab/error.hpp"

namespace phaselab {

namespace {

void check(const PhaseSample& sample, const Vector& x, const char* what) {
  if (x.size() != sample.dim())
    fail(ErrorCode::invalid_argument,
         std::string(what) + ": vector has dimension " + std::to_string(x.size()) +
             ", sample has dimension " + std::to_string(sample.dim()));
}

}  // namespace

double objective(const PhaseSample& sample, const Vector& x) {
  check(sample, x, "objective");
  const Eigen::ArrayXd s = sample.A * x;
  return (s.square() - sample.y.array()).square().mean();
}

Vector gradient(const PhaseSample& sample, const Vector& x) {
  check(sample, x, "gradient");
  const Eigen::ArrayXd s = sample.A * x;
  const Eigen::ArrayXd weight = (s.square() - sample.y.array()) * s;
  return (4.0 / sample.rows()) * (sample.A.transpose() * weight.matrix());
}

ExcessLoss excess_loss_parts(const PhaseSample& sample, const Vector& x, const Vector& x0) {
  check(sample, x, "excess_loss_parts");
  check(sample, x0, "excess_loss_parts");
  require(sample.noise.size() == sample.rows(), "excess_loss_parts: sample has no noise record");
  const Eigen::ArrayXd minus = sample.A * (x - x0);
  const Eigen::ArrayXd plus = sample.A * (x + x0);
  const Eigen::ArrayXd prod = minus * plus;
  ExcessLoss parts;
  parts.quadratic = prod.square().mean();
  parts.multiplier = 2.0 * (sample.noise.array() * prod).mean();
  return parts;
}

SpectralResult spectral_estimate(const PhaseSample& sample) {
  const int n = sample.dim();
  const int N = sample.rows();
  require(N >= 1, "spectral_init: empty sample");
  SpectralResult out;
  out.x = Vector::Zero(n);
  out.direction = Vector::Zero(n);
  Eigen::MatrixXd M = sample.A.transpose() * sample.y.asDiagonal() * sample.A;
  M /= N;
  if (M.cwiseAbs().maxCoeff() == 0.0) return out;

  // Shift by a Gershgorin lower bound so power iteration finds the
  // algebraically largest λ even when noise makes M indefinite.
  double shift = 0.0;
  for (int i = 0; i < n; ++i) {
    const double radius = M.row(i).cwiseAbs().sum() - std::abs(M(i, i));
    shift = std::max(shift, radius - M(i, i));
  }
  Vector v = random_unit_vector(n, 0x5eedULL);
  double lambda = v.dot(M * v);
  for (int it = 1; it <= 200; ++it) {
    Vector w = M * v + shift * v;
    const double norm = w.norm();
    if (norm == 0.0) break;
    v = w / norm;
    const double next = v.dot(M * v);
    out.iterations = it;
    const bool settled = std::abs(next - lambda) <= 1e-10 * std::abs(next);
    lambda = next;
    if (settled) break;
  }
  for (int i = 0; i < n; ++i) {
    if (v[i] != 0.0) {
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
  out.eigenvalue = lambda;
  out.direction = v;
  // mean(y) estimates ||x0||^2 without the factor-3 bias of λ1 under gaussian
  // designs; λ1 is the fallback when the noise drives the mean nonpositive.
  if (lambda > 0.0) {
    const double m = sample.y.mean();
    out.x = std::sqrt(m > 0.0 ? m : lambda) * v;
  }
  return out;
}

Vector spectral_init(const PhaseSample& sample) { return spectral_estimate(sample).x; }

ErrorMetrics error_metrics(const Vector& x_hat, const Vector& x0) {
  require(x_hat.size() == x0.size(), "error_metrics: dimension mismatch");
  const double minus = (x_hat - x0).norm();
  const double plus = (x_hat + x0).norm();
  ErrorMetrics m;
  m.product_error = minus * plus;
  m.sign_error = std::min(minus, plus);
  m.aligned_sign = plus < minus ? -1 : 1;
  return m;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long double value = 1.0L;
  for (int i = 1; i <= k; ++i) value = value * (n - k + i) / i;
  return static_cast<long long>(std::llround(value));
}

void validate(const SolverConfig& c) {
  require(c.max_iterations >= 1, "solver: max_iterations must be >= 1");
  require(c.restarts >= 1, "solver: restarts must be >= 1");
  require(c.gradient_tolerance >= 0.0, "solver: gradient_tolerance must be nonnegative");
  if (const auto* f = std::get_if<FixedStep>(&c.step_rule))
    require(f->step > 0.0, "solver: fixed step must be positive");
  if (const auto* b = std::get_if<Backtracking>(&c.step_rule)) {
    require(b->shrink > 0.0 && b->shrink < 1.0, "solver: shrink must lie in (0,1)");
    require(b->growth >= 1.0, "solver: growth must be >= 1");
    require(b->initial_step >= 0.0, "solver: initial step must be nonnegative");
  }
}

}  // namespace phaselab
