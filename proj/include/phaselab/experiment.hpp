#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phaselab/ensembles.hpp"
#include "phaselab/erm.hpp"
#include "phaselab/sets.hpp"

namespace phaselab {

enum class SignalKind { explicit_vector, random_on_shell, random_sparse };

struct SignalSpec {
  SignalKind kind = SignalKind::random_sparse;
  Vector values;     // explicit_vector
  int sparsity = 1;  // random_sparse
  double R0 = 1.0;
};

enum class SolverKind { pgd, oracle };

struct ExperimentConfig {
  ConstraintSet set = ConstraintSet::ambient(1);
  EnsembleKind ensemble = EnsembleKind::standard_gaussian;
  // The scale of each cell comes from sigma_grid; sigma = 0 means no noise.
  NoiseKind noise = NoiseKind::gaussian;
  SignalSpec x0;
  std::vector<int> N_grid;
  std::vector<double> sigma_grid;
  // Optional sweep over ||x0||; replaces x0.R0 for the random signal kinds.
  std::vector<double> R0_grid;
  int trials_per_cell = 1;
  SolverKind solver = SolverKind::pgd;
  SolverConfig solver_config;
  std::uint64_t master_seed = 1;
  double success_tolerance = 1e-6;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&);
};

void validate(const ExperimentConfig& config);

struct ResultRow {
  int N = 0;
  double sigma = 0.0;
  double R0 = 0.0;
  int trial = 0;
  double product_error = 0.0;
  double sign_error = 0.0;
  double objective = 0.0;
  bool converged = false;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct CellSummary {
  int N = 0;
  double sigma = 0.0;
  double R0 = 0.0;
  int trials = 0;
  int non_converged = 0;
  // Medians over converged trials; NaN when none converged.
  double median_product_error = 0.0;
  double median_sign_error = 0.0;
  // Fraction of all trials with sign_error <= success_tolerance.
  double success_fraction = 0.0;
};

struct ResultsTable {
  std::vector<ResultRow> rows;
  std::vector<CellSummary> summaries;
};

// Groups rows by (N, sigma, R0) in order of first appearance.
std::vector<CellSummary> summarize(const std::vector<ResultRow>& rows,
                                   double success_tolerance);

// Default worker count: PHASELAB_THREADS if set, else hardware concurrency.
int default_thread_count();

// Results do not depend on `threads`; 0 selects default_thread_count().
ResultsTable run_experiment(const ExperimentConfig& config, int threads = 0);

// The ground truth drawn for one trial (exposed for tests).
Vector draw_signal(const ExperimentConfig& config, double R0, std::uint64_t seed);

enum class SlopeAxis { N, sigma };
enum class SlopeMetric { median_product_error, median_sign_error };

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

// Least squares of log(metric) on log(axis) over the usable summary cells.
SlopeFit fit_slope(const ResultsTable& table, SlopeAxis axis, SlopeMetric metric);
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace phaselab
