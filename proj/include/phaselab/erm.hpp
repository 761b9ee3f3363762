#pragma once

#include <cstdint>
#include <variant>

#include "phaselab/ensembles.hpp"
#include "phaselab/sets.hpp"

namespace phaselab {

struct FixedStep {
  double step = 1e-3;
  friend bool operator==(const FixedStep&, const FixedStep&) = default;
};

// A step of 0 asks the solver to start from 0.1 / λ1 of the spectral matrix.
struct Backtracking {
  double shrink = 0.5;
  double growth = 1.1;
  double initial_step = 0.0;
  friend bool operator==(const Backtracking&, const Backtracking&) = default;
};

using StepRule = std::variant<FixedStep, Backtracking>;

struct SolverConfig {
  int max_iterations = 5000;
  double gradient_tolerance = 1e-10;
  StepRule step_rule = Backtracking{};
  int restarts = 1;
  long long oracle_budget = 1'000'000;
  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

void validate(const SolverConfig& config);

struct ErrorMetrics {
  double product_error = 0.0;
  double sign_error = 0.0;
  int aligned_sign = 1;
};

struct TrialResult {
  Vector x_hat;
  double objective_value = 0.0;
  double product_error = 0.0;
  double sign_error = 0.0;
  int iterations_used = 0;
  bool converged = false;
};

// (1/N) Σ (<a_i,x>^2 - y_i)^2
double objective(const PhaseSample& sample, const Vector& x);

// (4/N) Σ (<a_i,x>^2 - y_i) <a_i,x> a_i
Vector gradient(const PhaseSample& sample, const Vector& x);

struct ExcessLoss {
  double quadratic = 0.0;
  double multiplier = 0.0;
};

// objective(x) - objective(x0) = quadratic - multiplier.
ExcessLoss excess_loss_parts(const PhaseSample& sample, const Vector& x, const Vector& x0);

struct SpectralResult {
  Vector x;
  Vector direction;
  double eigenvalue = 0.0;
  int iterations = 0;
};

// Leading eigenpair of (1/N) Σ y_i a_i a_i^T by power iteration, scaled by the
// norm estimate sqrt(mean y).
SpectralResult spectral_estimate(const PhaseSample& sample);
Vector spectral_init(const PhaseSample& sample);

ErrorMetrics error_metrics(const Vector& x_hat, const Vector& x0);

// Projected gradient descent with restarts; never throws on non-convergence.
TrialResult solve_pgd(const PhaseSample& sample, const ConstraintSet& set,
                      const SolverConfig& config, std::uint64_t seed);

// Reference ERM: exhaustive support enumeration for sparse_cap (C(n,d) must fit
// the budget), many PGD restarts otherwise.
TrialResult solve_oracle(const PhaseSample& sample, const ConstraintSet& set,
                         const SolverConfig& config, std::uint64_t seed);

long long binomial(int n, int k);

}  // namespace phaselab
