#pragma once

#include <string>

namespace phaselab {

enum class Regime { noise_free_r0, high_noise_r2, large_signal_sN, small_signal_vN, low_snr_rN };

std::string to_string(Regime regime);

// Predicted sign-error rate with every absolute constant set to 1.
struct RatePrediction {
  double rate = 0.0;
  // Product-error rate σ sqrt(d log(en/d)/N) sqrt(log N) for the sparse model;
  // for l1 it echoes rate·R0 when R0 > 0.
  double product_rate = 0.0;
  Regime regime = Regime::noise_free_r0;
  int n = 0;
  int d = 0;
  int N = 0;
  double sigma = 0.0;
  double R0 = 0.0;
};

// R0 < 0 means the signal norm is unspecified; only the product rate is then
// meaningful (regime high_noise_r2).
RatePrediction predict_rate_sparse(int n, int d, int N, double sigma, double R0);

// Unit l1 ball, Q = 1.
RatePrediction predict_rate_l1(int n, int N, double sigma, double R0);

}  // namespace phaselab
