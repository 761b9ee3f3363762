#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "phaselab/error.hpp"
#include "phaselab/random.hpp"
#include "phaselab/sets.hpp"
#include "width_sampler.hpp"

namespace phaselab {

namespace detail {

namespace {
constexpr std::size_t kCacheLimit = 40'000'000;  // doubles across the three arrays
}

void WidthSampler::load(int draw, std::vector<double>& a) const {
  Engine engine = make_engine(seed_, Stream::width, static_cast<std::uint64_t>(draw));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = set_.dimension();
  a.resize(n);
  for (int i = 0; i < n; ++i) a[i] = std::abs(gauss(engine));
  std::sort(a.begin(), a.end(), std::greater<>());
}

WidthSampler::WidthSampler(const ConstraintSet& set, int draws, std::uint64_t seed)
    : set_(set), draws_(draws), seed_(seed) {
  require(draws >= 2, "mean width: need at least two gaussian draws");
  const int n = set.dimension();
  norm_.resize(draws);
  top_d_.resize(draws);
  const bool l1 = set.kind() == SetKind::l1_ball;
  cached_ = l1 && static_cast<std::size_t>(draws) * (3 * n + 2) <= kCacheLimit;
  if (cached_) {
    sorted_.resize(static_cast<std::size_t>(draws) * n);
    s1_.resize(static_cast<std::size_t>(draws) * (n + 1));
    s2_.resize(static_cast<std::size_t>(draws) * (n + 1));
  }
  std::vector<double> a;
  for (int j = 0; j < draws; ++j) {
    load(j, a);
    double sq = 0.0;
    double top = 0.0;
    for (int i = 0; i < n; ++i) {
      sq += a[i] * a[i];
      if (i < set.sparsity()) top += a[i] * a[i];
    }
    norm_[j] = std::sqrt(sq);
    top_d_[j] = std::sqrt(top);
    if (cached_) {
      const std::size_t off = static_cast<std::size_t>(j) * n;
      const std::size_t poff = static_cast<std::size_t>(j) * (n + 1);
      std::copy(a.begin(), a.end(), sorted_.begin() + off);
      s1_[poff] = 0.0;
      s2_[poff] = 0.0;
      for (int i = 0; i < n; ++i) {
        s1_[poff + i + 1] = s1_[poff + i] + a[i];
        s2_[poff + i + 1] = s2_[poff + i] + a[i] * a[i];
      }
    }
  }
}

double WidthSampler::support(int j, double r) const {
  switch (set_.kind()) {
    case SetKind::ambient: return r * norm_[j];
    case SetKind::l2_ball: return std::min(r, set_.radius()) * norm_[j];
    case SetKind::sparse_cap: return r * top_d_[j];
    case SetKind::l1_ball: break;
  }
  const int n = set_.dimension();
  if (cached_) {
    const std::size_t off = static_cast<std::size_t>(j) * n;
    const std::size_t poff = static_cast<std::size_t>(j) * (n + 1);
    return l1_l2_support_sorted(std::span(sorted_).subspan(off, n),
                                std::span(s1_).subspan(poff, n + 1),
                                std::span(s2_).subspan(poff, n + 1), set_.radius(), r);
  }
  std::vector<double> a;
  load(j, a);
  std::vector<double> S1(n + 1, 0.0), S2(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    S1[i + 1] = S1[i] + a[i];
    S2[i + 1] = S2[i] + a[i] * a[i];
  }
  return l1_l2_support_sorted(a, S1, S2, set_.radius(), r);
}

WidthEstimate WidthSampler::estimate(double r) const {
  require(r > 0.0, "mean width: r must be positive");
  double mean = 0.0;
  double m2 = 0.0;
  for (int j = 0; j < draws_; ++j) {
    const double v = support(j, r);
    const double delta = v - mean;
    mean += delta / (j + 1);
    m2 += delta * (v - mean);
  }
  WidthEstimate w;
  w.value = mean;
  w.std_error = std::sqrt(m2 / (draws_ - 1) / draws_);
  w.samples = draws_;
  return w;
}

}  // namespace detail

WidthEstimate mean_width_mc(const ConstraintSet& set, double r, int gaussian_draws,
                            std::uint64_t seed) {
  require(r > 0.0, "mean_width_mc: r must be positive");
  require(gaussian_draws >= 2, "mean_width_mc: need at least two gaussian draws");
  return detail::WidthSampler(set, gaussian_draws, seed).estimate(r);
}

double expected_gaussian_norm(int n) {
  require(n >= 1, "expected_gaussian_norm: n must be positive");
  return std::sqrt(2.0) * std::exp(std::lgamma((n + 1) / 2.0) - std::lgamma(n / 2.0));
}

double mean_width_closed_form(const ConstraintSet& set, double r) {
  require(r > 0.0, "mean_width_closed_form: r must be positive");
  const double n = set.dimension();
  switch (set.kind()) {
    case SetKind::sparse_cap: {
      const double d = set.sparsity();
      return r * std::sqrt(d * std::log(std::numbers::e * n / d));
    }
    case SetKind::l1_ball: {
      // radius·B_1 ∩ r·B_2 = radius·(B_1 ∩ (r/radius)·B_2)
      const double rho = set.radius();
      const double s = r / rho;
      const double w = s * s * n >= 1.0 ? std::sqrt(std::log(std::numbers::e * n * s * s))
                                         : s * std::sqrt(n);
      return rho * w;
    }
    default:
      fail(ErrorCode::unsupported_set,
           "mean_width_closed_form: no closed form for " + to_string(set.kind()));
  }
}

}  // namespace phaselab
