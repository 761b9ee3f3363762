#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "phaselab/types.hpp"

namespace phaselab {

enum class EnsembleKind { standard_gaussian, rademacher, scaled_uniform };

// Isotropic subgaussian measurement law on R^n.
struct Ensemble {
  EnsembleKind kind = EnsembleKind::standard_gaussian;
  int dimension = 1;
};

enum class NoiseKind { none, gaussian, bounded_uniform };

// `scale` is the standard deviation for gaussian noise and the half-width
// ||w||_inf for bounded_uniform noise.
struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  double scale = 0.0;
};

// y_i = <a_i, x0>^2 + noise_i, with the ground truth retained for scoring.
struct PhaseSample {
  Matrix A;
  Vector y;
  Vector x0;
  Vector noise;

  int rows() const { return static_cast<int>(A.rows()); }
  int dim() const { return static_cast<int>(A.cols()); }
};

std::string to_string(EnsembleKind kind);
std::string to_string(NoiseKind kind);
EnsembleKind parse_ensemble_kind(const std::string& name);
NoiseKind parse_noise_kind(const std::string& name);

// N independent rows; identical seeds give identical matrices.
Matrix draw_measurements(const Ensemble& ensemble, int N, std::uint64_t seed);

Vector draw_noise(const NoiseModel& model, int N, std::uint64_t seed);

// Measurements and noise come from independent sub-streams of `seed`.
PhaseSample generate_sample(const Vector& x0, const Ensemble& ensemble,
                            const NoiseModel& noise, int N, std::uint64_t seed);

// Builds a sample from an explicit design; used by tests and the C API.
PhaseSample make_sample(Matrix A, const Vector& x0, Vector noise);

struct SmallBallEstimate {
  double kappa0 = 0.0;
  Vector worst_s;
  Vector worst_t;
};

// Minimum over sampled unit pairs (s, t) of the Monte Carlo mean of
// |<a,s><a,t>|.
SmallBallEstimate estimate_smallball_kappa0(const Ensemble& ensemble,
                                            int pair_count, int mc_samples,
                                            std::uint64_t seed);

// Monte Carlo mean of |<a,s><a,t>| for one fixed pair, with its standard error.
std::pair<double, double> smallball_mean(const Ensemble& ensemble,
                                         const Vector& s, const Vector& t,
                                         int mc_samples, std::uint64_t seed);

// max over sampled unit directions t of |mean <a,t>^2 - 1|.
double estimate_isotropy_defect(const Ensemble& ensemble, int directions,
                                int mc_samples, std::uint64_t seed);

// Same statistic for caller-supplied directions (normalized internally).
double isotropy_defect_along(const Ensemble& ensemble, const Matrix& directions,
                             int mc_samples, std::uint64_t seed);

Vector random_unit_vector(int n, std::uint64_t seed);

}  // namespace phaselab
