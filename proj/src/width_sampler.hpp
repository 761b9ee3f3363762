#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "phaselab/sets.hpp"

namespace phaselab::detail {

double l1_l2_support_sorted(std::span<const double> a, std::span<const double> S1,
                            std::span<const double> S2, double rho, double r);

// A fixed batch of gaussian draws, preprocessed once, so the support function
// of set ∩ r·B_2 can be re-evaluated at many radii on common random numbers.
// Draw j uses its own sub-stream, so values do not depend on batch layout.
class WidthSampler {
public:
  WidthSampler(const ConstraintSet& set, int draws, std::uint64_t seed);

  WidthEstimate estimate(double r) const;
  double support(int draw, double r) const;
  int draws() const { return draws_; }

private:
  void load(int draw, std::vector<double>& sorted_abs) const;

  ConstraintSet set_;
  int draws_;
  std::uint64_t seed_;
  // Per-draw scalars for the kinds that only need them.
  std::vector<double> norm_;
  std::vector<double> top_d_;
  // Sorted |g| plus prefix sums for l1 sets, cached when small enough.
  bool cached_ = false;
  std::vector<double> sorted_;
  std::vector<double> s1_;
  std::vector<double> s2_;
};

}  // namespace phaselab::detail
