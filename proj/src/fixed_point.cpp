#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "phaselab/error.hpp"
#include "phaselab/random.hpp"
#include "phaselab/sets.hpp"
#include "width_sampler.hpp"

namespace phaselab {

std::string to_string(Functional f) {
  switch (f) {
    case Functional::r0: return "r0";
    case Functional::r2: return "r2";
    case Functional::rN: return "rN";
    case Functional::sN: return "sN";
    case Functional::vN: return "vN";
    case Functional::qN: return "qN";
    case Functional::tN: return "tN";
  }
  return "unknown";
}

Functional parse_functional(const std::string& name) {
  for (Functional f : {Functional::r0, Functional::r2, Functional::rN, Functional::sN,
                       Functional::vN, Functional::qN, Functional::tN})
    if (name == to_string(f)) return f;
  fail(ErrorCode::parse_error, "unknown functional '" + name + "'");
}

std::string to_string(Backend b) {
  return b == Backend::closed_form ? "closed_form" : "monte_carlo";
}

Backend parse_backend(const std::string& name) {
  if (name == "closed_form") return Backend::closed_form;
  if (name == "monte_carlo") return Backend::monte_carlo;
  fail(ErrorCode::parse_error, "unknown backend '" + name + "'");
}

int functional_power(Functional f) {
  switch (f) {
    case Functional::r0: return 0;
    case Functional::r2: return 1;
    case Functional::rN: return 1;
    case Functional::sN: return 2;
    case Functional::vN: return 3;
    case Functional::qN: return 2;
    case Functional::tN: return 3;
  }
  return 1;
}

namespace {

bool uses_packing(Functional f) { return f == Functional::qN || f == Functional::tN; }

// Evaluates Φ(r) for one query. Monte Carlo widths reuse one batch of draws so
// the profile is an exact function of r on common random numbers.
class Profile {
public:
  Profile(const ConstraintSet& set, const FixedPointQuery& q, const McConfig& mc)
      : set_(set), q_(q), mc_(mc) {
    if (q.backend == Backend::closed_form && !uses_packing(q.functional) &&
        set.kind() != SetKind::sparse_cap && set.kind() != SetKind::l1_ball)
      fail(ErrorCode::unsupported_set,
           "closed_form backend is only available for sparse_cap and l1_ball");
    if (q.backend == Backend::monte_carlo && !uses_packing(q.functional)) {
      if (global_sparse()) {
        sampler_ = std::make_unique<detail::WidthSampler>(doubled_cap(), mc.gaussian_draws,
                                                          mc.seed);
      } else {
        sampler_ = std::make_unique<detail::WidthSampler>(set, mc.gaussian_draws, mc.seed);
      }
    }
  }

  double operator()(double r) const {
    switch (q_.functional) {
      case Functional::rN:
      case Functional::sN:
      case Functional::vN:
        return width(set_, r);
      case Functional::r0:
      case Functional::r2:
        return global_complexity(r);
      case Functional::qN:
      case Functional::tN:
        return sudakov_complexity(set_, q_.shell_R0, r, mc_);
    }
    return 0.0;
  }

private:
  bool global_sparse() const {
    return (q_.functional == Functional::r0 || q_.functional == Functional::r2) &&
           set_.kind() == SetKind::sparse_cap;
  }

  // Normalized differences/sums of d-sparse vectors are 2d-sparse unit vectors.
  ConstraintSet doubled_cap() const {
    return ConstraintSet::sparse_cap(set_.dimension(),
                                     std::min(2 * set_.sparsity(), set_.dimension()));
  }

  double width(const ConstraintSet& set, double r) const {
    if (q_.backend == Backend::closed_form) return mean_width_closed_form(set, r);
    return sampler_->estimate(r).value;
  }

  // E_R surrogate: constant 2d-sparse sphere width for the sparse cone, the
  // localized convex-body bound otherwise (with ℓ(2T ∩ sB) = 2ℓ(T ∩ (s/2)B)).
  double global_complexity(double R) const {
    if (set_.kind() == SetKind::sparse_cap) {
      const ConstraintSet cap = doubled_cap();
      return width(cap, 1.0);
    }
    const double x0 = q_.shell_R0;
    if (x0 >= std::sqrt(R)) {
      const double s = R / x0;
      return (x0 / R) * 2.0 * width(set_, s / 2.0);
    }
    return 2.0 * width(set_, std::sqrt(R) / 2.0) / std::sqrt(R);
  }

  const ConstraintSet& set_;
  FixedPointQuery q_;
  McConfig mc_;
  std::unique_ptr<detail::WidthSampler> sampler_;
};

}  // namespace

double complexity_profile(const ConstraintSet& set, const FixedPointQuery& query,
                          const McConfig& mc, double r) {
  require(r > 0.0, "complexity_profile: r must be positive");
  return Profile(set, query, mc)(r);
}

FixedPointResult fixed_point(const ConstraintSet& set, const FixedPointQuery& query,
                             const McConfig& mc) {
  require(query.level > 0.0, "fixed_point: level must be positive");
  require(query.N >= 1, "fixed_point: N must be positive");
  require(query.shell_R0 >= 0.0, "fixed_point: shell radius must be nonnegative");
  const int p = functional_power(query.functional);
  FixedPointResult out;
  out.power = p;
  if (std::isinf(query.level)) return out;  // threshold never binds

  const Profile phi(set, query, mc);
  const double scale = query.level * std::sqrt(static_cast<double>(query.N));
  auto holds = [&](double r) { return phi(r) <= scale * std::pow(r, p); };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  double hi = set.bounded() ? set.diameter() : 1.0;
  while (!holds(hi)) {
    hi *= 2.0;
    if (hi > 1e30) {
      out.value = kInf;
      out.bracket_width = kInf;
      return out;
    }
  }
  double lo = std::ldexp(hi, -40);
  if (holds(lo)) {
    out.value = 0.0;
    out.bracket_width = lo;
    return out;
  }

  // Φ(r)/r^p is nonincreasing for star-shaped sets; scan it for violations
  // that exceed what the estimator noise can explain.
  if (query.backend == Backend::monte_carlo || uses_packing(query.functional)) {
    double prev = kInf;
    for (int k = 0; k <= 8; ++k) {
      const double r = lo * std::pow(hi / lo, k / 8.0);
      const double ratio = phi(r) / std::pow(r, p);
      if (ratio > prev * (1.0 + 1e-9)) {
        std::ostringstream os;
        os << "non-monotone profile: Φ(r)/r^" << p << " increases near r=" << r;
        out.warnings.push_back(os.str());
        break;
      }
      prev = ratio;
    }
  }

  for (int it = 0; it < 60; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (holds(mid)) hi = mid;
    else lo = mid;
  }
  out.value = hi;
  out.bracket_width = hi - lo;
  return out;
}

double l1_rN_display(int n, int N, double Q) {
  require(n >= 1 && N >= 1 && Q > 0.0, "l1_rN_display: invalid arguments");
  const double q2n = Q * Q * N;
  if (n <= q2n) return 0.0;
  return std::sqrt(std::log(n / q2n) / q2n);
}

double l1_sN_display(int n, int N, double eta) {
  require(n >= 1 && N >= 1 && eta > 0.0, "l1_sN_display: invalid arguments");
  if (std::isinf(eta)) return 0.0;
  const double e2n = eta * eta * N;
  if (n >= eta * std::sqrt(static_cast<double>(N)))
    return std::pow(std::log(std::numbers::e * double(n) * n / e2n) / e2n, 0.25);
  return std::sqrt(n / e2n);
}

double l1_vN_display(int n, int N, double zeta) {
  require(n >= 1 && N >= 1 && zeta > 0.0, "l1_vN_display: invalid arguments");
  if (std::isinf(zeta)) return 0.0;
  const double z2n = zeta * zeta * N;
  if (n >= std::pow(zeta, 2.0 / 3.0) * std::cbrt(static_cast<double>(N)))
    return std::pow(std::log(std::numbers::e * double(n) * n * n / z2n) / z2n, 1.0 / 6.0);
  return std::pow(n / z2n, 0.25);
}

}  // namespace phaselab
