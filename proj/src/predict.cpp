#include "phaselab/predict.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "phaselab/error.hpp"
#include "phaselab/sets.hpp"

namespace phaselab {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::noise_free_r0: return "noise_free_r0";
    case Regime::high_noise_r2: return "high_noise_r2";
    case Regime::large_signal_sN: return "large_signal_sN";
    case Regime::small_signal_vN: return "small_signal_vN";
    case Regime::low_snr_rN: return "low_snr_rN";
  }
  return "unknown";
}

RatePrediction predict_rate_sparse(int n, int d, int N, double sigma, double R0) {
  require(d >= 1 && d <= n, "predict_rate_sparse: need 1 <= d <= n");
  require(n <= 100'000'000, "predict_rate_sparse: n too large");
  require(N >= 2, "predict_rate_sparse: need N >= 2");
  require(sigma >= 0.0 && std::isfinite(sigma), "predict_rate_sparse: sigma must be nonnegative");
  RatePrediction p{0.0, 0.0, Regime::noise_free_r0, n, d, N, sigma, R0};
  const double complexity = d * std::log(std::numbers::e * n / d);
  if (sigma == 0.0) {
    // Below the sample threshold nothing is guaranteed.
    if (N < complexity) p.rate = p.product_rate = std::numeric_limits<double>::infinity();
    return p;
  }
  const double star = sigma * std::sqrt(complexity / N) * std::sqrt(std::log(double(N)));
  p.product_rate = star;
  if (R0 < 0.0) {
    p.regime = Regime::high_noise_r2;
    p.rate = std::sqrt(star);
  } else if (R0 * R0 >= star) {
    p.regime = Regime::large_signal_sN;
    p.rate = star / R0;
  } else {
    p.regime = Regime::small_signal_vN;
    p.rate = std::sqrt(star);
  }
  return p;
}

RatePrediction predict_rate_l1(int n, int N, double sigma, double R0) {
  require(n >= 2 && N >= 2, "predict_rate_l1: need n, N >= 2");
  require(sigma >= 0.0 && std::isfinite(sigma), "predict_rate_l1: sigma must be nonnegative");
  require(R0 >= 0.0, "predict_rate_l1: R0 must be nonnegative");
  RatePrediction p{0.0, 0.0, Regime::noise_free_r0, n, 0, N, sigma, R0};
  const double r = l1_rN_display(n, N, 1.0);
  const double logN = std::log(double(N));
  if (sigma == 0.0) {
    p.rate = r;
  } else if (R0 > 0.0 && sigma / R0 <= r / std::sqrt(logN)) {
    p.regime = Regime::low_snr_rN;
    p.rate = r;
  } else {
    const double zeta = 1.0 / (sigma * std::sqrt(logN));
    const double v = l1_vN_display(n, N, zeta);
    if (R0 > 0.0 && R0 >= v) {
      p.regime = Regime::large_signal_sN;
      p.rate = l1_sN_display(n, N, R0 * zeta);
    } else {
      p.regime = Regime::small_signal_vN;
      p.rate = v;
    }
  }
  p.product_rate = p.rate * R0;
  return p;
}

}  // namespace phaselab
