#include "phaselab/ensembles.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "phaselab/error.hpp"
#include "phaselab/random.hpp"

namespace phaselab {

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::standard_gaussian: return "standard_gaussian";
    case EnsembleKind::rademacher: return "rademacher";
    case EnsembleKind::scaled_uniform: return "scaled_uniform";
  }
  return "unknown";
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::bounded_uniform: return "bounded_uniform";
  }
  return "unknown";
}

EnsembleKind parse_ensemble_kind(const std::string& name) {
  if (name == "standard_gaussian" || name == "gaussian") return EnsembleKind::standard_gaussian;
  if (name == "rademacher") return EnsembleKind::rademacher;
  if (name == "scaled_uniform") return EnsembleKind::scaled_uniform;
  fail(ErrorCode::parse_error, "unknown ensemble kind '" + name + "'");
}

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "none") return NoiseKind::none;
  if (name == "gaussian") return NoiseKind::gaussian;
  if (name == "bounded_uniform") return NoiseKind::bounded_uniform;
  fail(ErrorCode::parse_error, "unknown noise kind '" + name + "'");
}

namespace {

template <class Fill>
Matrix fill_rows(int N, int n, Engine& engine, Fill&& draw) {
  Matrix A(N, n);
  double* data = A.data();
  for (Eigen::Index k = 0; k < A.size(); ++k) data[k] = draw(engine);
  return A;
}

Matrix draw_rows(EnsembleKind kind, int N, int n, Engine& engine) {
  switch (kind) {
    case EnsembleKind::standard_gaussian: {
      std::normal_distribution<double> g(0.0, 1.0);
      return fill_rows(N, n, engine, [&](Engine& e) { return g(e); });
    }
    case EnsembleKind::rademacher: {
      std::bernoulli_distribution coin(0.5);
      return fill_rows(N, n, engine, [&](Engine& e) { return coin(e) ? 1.0 : -1.0; });
    }
    case EnsembleKind::scaled_uniform: {
      const double h = std::sqrt(3.0);
      std::uniform_real_distribution<double> u(-h, h);
      return fill_rows(N, n, engine, [&](Engine& e) { return u(e); });
    }
  }
  return {};
}

}  // namespace

Matrix draw_measurements(const Ensemble& ensemble, int N, std::uint64_t seed) {
  require(N >= 1, "draw_measurements: N must be positive");
  require(ensemble.dimension >= 1, "draw_measurements: dimension must be positive");
  Engine engine = make_engine(seed, Stream::measurements);
  return draw_rows(ensemble.kind, N, ensemble.dimension, engine);
}

Vector draw_noise(const NoiseModel& model, int N, std::uint64_t seed) {
  require(N >= 1, "draw_noise: N must be positive");
  require(model.scale >= 0.0 && std::isfinite(model.scale),
          "draw_noise: scale must be a nonnegative finite number");
  Vector w = Vector::Zero(N);
  if (model.kind == NoiseKind::none || model.scale == 0.0) return w;
  Engine engine = make_engine(seed, Stream::noise);
  if (model.kind == NoiseKind::gaussian) {
    std::normal_distribution<double> g(0.0, model.scale);
    for (int i = 0; i < N; ++i) w[i] = g(engine);
  } else {
    std::uniform_real_distribution<double> u(-model.scale, model.scale);
    for (int i = 0; i < N; ++i) w[i] = u(engine);
  }
  return w;
}

PhaseSample make_sample(Matrix A, const Vector& x0, Vector noise) {
  require(A.cols() == x0.size(), "make_sample: x0 dimension does not match measurement dimension");
  require(A.rows() == noise.size(), "make_sample: noise length does not match number of rows");
  PhaseSample s;
  const Vector proj = A * x0;
  s.y = proj.array().square().matrix() + noise;
  s.A = std::move(A);
  s.x0 = x0;
  s.noise = std::move(noise);
  return s;
}

PhaseSample generate_sample(const Vector& x0, const Ensemble& ensemble,
                            const NoiseModel& noise, int N, std::uint64_t seed) {
  require(x0.size() == ensemble.dimension,
          "generate_sample: x0 has dimension " + std::to_string(x0.size()) +
              " but the ensemble has dimension " + std::to_string(ensemble.dimension));
  Matrix A = draw_measurements(ensemble, N, seed);
  Vector w = draw_noise(noise, N, seed);
  return make_sample(std::move(A), x0, std::move(w));
}

Vector random_unit_vector(int n, std::uint64_t seed) {
  require(n >= 1, "random_unit_vector: dimension must be positive");
  Engine engine = make_engine(seed, Stream::directions);
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = g(engine);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

std::pair<double, double> smallball_mean(const Ensemble& ensemble,
                                         const Vector& s, const Vector& t,
                                         int mc_samples, std::uint64_t seed) {
  require(mc_samples >= 2, "smallball_mean: need at least two samples");
  require(s.size() == ensemble.dimension && t.size() == ensemble.dimension,
          "smallball_mean: dimension mismatch");
  const Matrix A = draw_measurements(ensemble, mc_samples, seed);
  const Eigen::ArrayXd prod = ((A * s).array() * (A * t).array()).abs();
  const double mean = prod.mean();
  const double var = (prod - mean).square().sum() / (mc_samples - 1);
  return {mean, std::sqrt(var / mc_samples)};
}

SmallBallEstimate estimate_smallball_kappa0(const Ensemble& ensemble,
                                            int pair_count, int mc_samples,
                                            std::uint64_t seed) {
  require(pair_count >= 1, "estimate_smallball_kappa0: pair_count must be >= 1");
  require(mc_samples >= 100, "estimate_smallball_kappa0: mc_samples must be >= 100");
  const int n = ensemble.dimension;
  const Matrix A = draw_measurements(ensemble, mc_samples, seed);
  SmallBallEstimate best;
  best.kappa0 = std::numeric_limits<double>::infinity();
  for (int p = 0; p < pair_count; ++p) {
    const Vector s = random_unit_vector(n, derive_seed(seed, Stream::pairs, 2 * p));
    const Vector t = random_unit_vector(n, derive_seed(seed, Stream::pairs, 2 * p + 1));
    const double m = ((A * s).array() * (A * t).array()).abs().mean();
    if (m < best.kappa0) {
      best.kappa0 = m;
      best.worst_s = s;
      best.worst_t = t;
    }
  }
  return best;
}

double isotropy_defect_along(const Ensemble& ensemble, const Matrix& directions,
                             int mc_samples, std::uint64_t seed) {
  require(directions.rows() >= 1, "isotropy_defect: need at least one direction");
  require(directions.cols() == ensemble.dimension, "isotropy_defect: dimension mismatch");
  require(mc_samples >= 1, "isotropy_defect: mc_samples must be positive");
  const Matrix A = draw_measurements(ensemble, mc_samples, seed);
  double defect = 0.0;
  for (Eigen::Index k = 0; k < directions.rows(); ++k) {
    Vector t = directions.row(k).transpose();
    require(t.norm() > 0.0, "isotropy_defect: zero direction");
    t /= t.norm();
    const double second = (A * t).squaredNorm() / mc_samples;
    defect = std::max(defect, std::abs(second - 1.0));
  }
  return defect;
}

double estimate_isotropy_defect(const Ensemble& ensemble, int directions,
                                int mc_samples, std::uint64_t seed) {
  require(directions >= 1, "estimate_isotropy_defect: directions must be >= 1");
  Matrix dirs(directions, ensemble.dimension);
  for (int k = 0; k < directions; ++k)
    dirs.row(k) = random_unit_vector(ensemble.dimension,
                                     derive_seed(seed, Stream::directions, k)).transpose();
  return isotropy_defect_along(ensemble, dirs, mc_samples, seed);
}

}  // namespace phaselab
