#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "phaselab/erm.hpp"
#include "phaselab/error.hpp"
#include "phaselab/random.hpp"

namespace phaselab {

namespace {

struct Run {
  Vector x;
  double f = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

double initial_step(const SolverConfig& config, double lambda1) {
  if (const auto* fixed = std::get_if<FixedStep>(&config.step_rule)) return fixed->step;
  const auto& bt = std::get<Backtracking>(config.step_rule);
  if (bt.initial_step > 0.0) return bt.initial_step;
  return lambda1 > 0.0 ? 0.1 / lambda1 : 1.0;
}

Run descend(const PhaseSample& sample, const ConstraintSet& set, const Vector& start,
            const SolverConfig& config, double step) {
  Run run;
  run.x = project(set, start);
  run.f = objective(sample, run.x);
  const auto* bt = std::get_if<Backtracking>(&config.step_rule);
  for (int it = 1; it <= config.max_iterations; ++it) {
    run.iterations = it;
    const Vector g = gradient(sample, run.x);
    Vector next;
    double f_next = 0.0;
    if (bt == nullptr) {
      next = project(set, run.x - step * g);
      f_next = objective(sample, next);
    } else {
      // Accept once the quadratic upper model at x majorizes the new value;
      // this guarantees f(next) <= f(x). When the model promises less than the
      // objective can resolve, x is stationary to working precision.
      bool accepted = false, floor_hit = false;
      for (int shrink = 0; shrink < 80; ++shrink) {
        next = project(set, run.x - step * g);
        f_next = objective(sample, next);
        const Vector delta = next - run.x;
        const double model = run.f + g.dot(delta) + delta.squaredNorm() / (2.0 * step);
        if (f_next <= model && f_next <= run.f) {
          accepted = true;
          break;
        }
        if (run.f - model <= 1e-13 * std::abs(run.f)) {
          floor_hit = true;
          break;
        }
        step *= bt->shrink;
      }
      if (floor_hit) {
        run.converged = true;
        break;
      }
      if (!accepted) break;
    }
    const double mapping = (run.x - next).norm() / step;
    run.x = std::move(next);
    run.f = f_next;
    if (mapping <= config.gradient_tolerance) {
      run.converged = true;
      break;
    }
    if (bt != nullptr) step *= bt->growth;
    if (!std::isfinite(run.f)) break;
  }
  return run;
}

Vector restart_point(const ConstraintSet& set, int n, double norm, std::uint64_t seed, int k) {
  Engine engine = make_engine(seed, Stream::solver, static_cast<std::uint64_t>(k));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = gauss(engine);
  x = project(set, x);
  const double current = x.norm();
  if (current > 0.0) x *= norm / current;
  return project(set, x);
}

TrialResult finish(const PhaseSample& sample, const Run& run, int total_iterations) {
  TrialResult out;
  out.x_hat = run.x;
  out.objective_value = run.f;
  out.iterations_used = total_iterations;
  out.converged = run.converged;
  if (sample.x0.size() == run.x.size()) {
    const auto m = error_metrics(run.x, sample.x0);
    out.product_error = m.product_error;
    out.sign_error = m.sign_error;
  }
  return out;
}

Run multi_start(const PhaseSample& sample, const ConstraintSet& set,
                const SolverConfig& config, std::uint64_t seed, int restarts,
                int& total_iterations) {
  const SpectralResult spec = spectral_estimate(sample);
  const double step = initial_step(config, spec.eigenvalue);
  const double norm = spec.x.norm();
  Run best;
  for (int k = 0; k < restarts; ++k) {
    const Vector start =
        k == 0 ? spec.x : restart_point(set, sample.dim(), norm, seed, k);
    Run run = descend(sample, set, start, config, step);
    total_iterations += run.iterations;
    if (run.f < best.f) best = std::move(run);
  }
  return best;
}

// Damped Newton on the quartic restricted to a fixed support, falling back to
// gradient steps where the Hessian is not positive definite.
Run newton_restricted(const Matrix& As, const Vector& y, const Vector& start, int max_iter) {
  const double N = static_cast<double>(As.rows());
  auto f = [&](const Vector& z) {
    const Eigen::ArrayXd s = As * z;
    return (s.square() - y.array()).square().sum() / N;
  };
  Run run;
  run.x = start;
  run.f = f(start);
  for (int it = 1; it <= max_iter; ++it) {
    run.iterations = it;
    const Eigen::ArrayXd s = As * run.x;
    const Eigen::ArrayXd r = s.square() - y.array();
    const Vector g = (4.0 / N) * (As.transpose() * (r * s).matrix());
    if (g.norm() <= 1e-15 * (1.0 + run.f)) {
      run.converged = true;
      break;
    }
    const Eigen::ArrayXd w = 3.0 * s.square() - y.array();
    const Eigen::MatrixXd H = (4.0 / N) * (As.transpose() * w.matrix().asDiagonal() * As);
    Vector dir;
    Eigen::LLT<Eigen::MatrixXd> llt(H);
    if (llt.info() == Eigen::Success) dir = -llt.solve(g);
    if (dir.size() == 0 || !dir.allFinite() || dir.dot(g) >= 0.0) {
      const double scale = std::max(H.norm(), 1e-12);
      dir = -g / scale;
    }
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Vector z = run.x + t * dir;
      const double fz = f(z);
      if (fz <= run.f + 1e-4 * t * g.dot(dir)) {
        moved = fz < run.f || (z - run.x).norm() > 0.0;
        run.x = z;
        run.f = fz;
        break;
      }
      t *= 0.5;
    }
    if (!moved) {
      run.converged = true;
      break;
    }
  }
  return run;
}

// Next k-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[i] == n - k + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  return true;
}

}  // namespace

TrialResult solve_pgd(const PhaseSample& sample, const ConstraintSet& set,
                      const SolverConfig& config, std::uint64_t seed) {
  validate(config);
  require(set.dimension() == sample.dim(), "solve_pgd: set and sample dimensions differ");
  int total = 0;
  const Run best = multi_start(sample, set, config, seed, config.restarts, total);
  return finish(sample, best, total);
}

TrialResult solve_oracle(const PhaseSample& sample, const ConstraintSet& set,
                         const SolverConfig& config, std::uint64_t seed) {
  validate(config);
  require(set.dimension() == sample.dim(), "solve_oracle: set and sample dimensions differ");
  const int n = sample.dim();

  if (set.kind() != SetKind::sparse_cap) {
    int total = 0;
    Run best = multi_start(sample, set, config, seed, std::max(config.restarts, 32), total);
    const double f0 = objective(sample, Vector::Zero(n));
    if (f0 < best.f) {
      best.x = Vector::Zero(n);
      best.f = f0;
    }
    return finish(sample, best, total);
  }

  const int d = set.sparsity();
  const long long needed = binomial(n, d);
  if (needed > config.oracle_budget) {
    std::ostringstream os;
    os << "solve_oracle: enumerating supports of size " << d << " in dimension " << n
       << " requires an oracle_budget of at least " << needed << " (have "
       << config.oracle_budget << ")";
    fail(ErrorCode::budget_exceeded, os.str());
  }

  // Incumbent: the PGD answer on the same inputs, and the origin.
  int total = 0;
  Run best = multi_start(sample, set, config, seed, config.restarts, total);
  const double f0 = objective(sample, Vector::Zero(n));
  if (f0 < best.f) {
    best.x = Vector::Zero(n);
    best.f = f0;
  }
  best.converged = true;

  // The objective is a mean of squares, so it can never go below 0; an
  // incumbent at that floor (to rounding) is already a global minimizer.
  const double floor = 1e-20 * sample.y.array().square().mean();
  if (best.f <= floor) return finish(sample, best, total);

  // Visit supports ranked by the diagonal of the spectral matrix first.
  const Eigen::ArrayXd score =
      (sample.A.array().square().colwise() * sample.y.array()).colwise().mean().transpose();
  std::vector<int> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) { return score[a] > score[b]; });

  std::vector<int> combo(d);
  std::iota(combo.begin(), combo.end(), 0);
  Matrix As(sample.rows(), d);
  do {
    for (int j = 0; j < d; ++j) As.col(j) = sample.A.col(rank[combo[j]]);
    // Restricted spectral start and one seeded random start of the same norm.
    Eigen::MatrixXd Ms = As.transpose() * sample.y.asDiagonal() * As / sample.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Ms);
    const double norm = std::sqrt(std::max(sample.y.mean(), 0.0));
    Vector first = eig.eigenvectors().col(d - 1) * norm;
    Engine engine = make_engine(seed, Stream::solver, 1'000'000ULL + total);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector second(d);
    for (int j = 0; j < d; ++j) second[j] = gauss(engine);
    second *= norm / std::max(second.norm(), 1e-300);
    for (const Vector* start : {&first, &second}) {
      Run run = newton_restricted(As, sample.y, *start, 200);
      total += run.iterations;
      if (run.f < best.f) {
        Vector x = Vector::Zero(n);
        for (int j = 0; j < d; ++j) x[rank[combo[j]]] = run.x[j];
        const double f = objective(sample, x);
        if (f < best.f) {
          best.x = std::move(x);
          best.f = f;
        }
      }
    }
    if (best.f <= floor) break;
  } while (next_combination(combo, n));
  return finish(sample, best, total);
}

}  // namespace phaselab
