#include "phaselab/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "phaselab/error.hpp"

namespace phaselab {

ConstraintSet ConstraintSet::sparse_cap(int n, int d) {
  require(n >= 1, "sparse_cap: n must be positive");
  require(d >= 1 && d <= n, "sparse_cap: sparsity must satisfy 1 <= d <= n");
  return ConstraintSet(SetKind::sparse_cap, n, d, std::numeric_limits<double>::infinity());
}

ConstraintSet ConstraintSet::l1_ball(int n, double radius) {
  require(n >= 1, "l1_ball: n must be positive");
  require(radius > 0.0 && std::isfinite(radius), "l1_ball: radius must be positive");
  return ConstraintSet(SetKind::l1_ball, n, n, radius);
}

ConstraintSet ConstraintSet::l2_ball(int n, double radius) {
  require(n >= 1, "l2_ball: n must be positive");
  require(radius > 0.0 && std::isfinite(radius), "l2_ball: radius must be positive");
  return ConstraintSet(SetKind::l2_ball, n, n, radius);
}

ConstraintSet ConstraintSet::ambient(int n) {
  require(n >= 1, "ambient: n must be positive");
  return ConstraintSet(SetKind::ambient, n, n, std::numeric_limits<double>::infinity());
}

double ConstraintSet::diameter() const {
  return bounded() ? 2.0 * radius_ : std::numeric_limits<double>::infinity();
}

std::string to_string(SetKind kind) {
  switch (kind) {
    case SetKind::sparse_cap: return "sparse_cap";
    case SetKind::l1_ball: return "l1_ball";
    case SetKind::l2_ball: return "l2_ball";
    case SetKind::ambient: return "ambient";
  }
  return "unknown";
}

std::string ConstraintSet::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(kind_) << ":n=" << n_;
  if (kind_ == SetKind::sparse_cap) os << ",d=" << d_;
  if (bounded()) os << ",radius=" << radius_;
  return os.str();
}

ConstraintSet parse_set(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  int n = -1;
  int d = -1;
  double radius = 1.0;
  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        fail(ErrorCode::parse_error, "set spec: expected key=value, got '" + item + "'");
      const std::string key = item.substr(0, eq);
      const std::string value = item.substr(eq + 1);
      try {
        if (key == "n") n = std::stoi(value);
        else if (key == "d") d = std::stoi(value);
        else if (key == "radius") radius = std::stod(value);
        else fail(ErrorCode::parse_error, "set spec: unknown key '" + key + "'");
      } catch (const std::logic_error&) {
        fail(ErrorCode::parse_error, "set spec: bad value for '" + key + "'");
      }
    }
  }
  if (n < 1) fail(ErrorCode::parse_error, "set spec '" + text + "' needs n=<dimension>");
  if (kind == "sparse_cap") {
    if (d < 1) fail(ErrorCode::parse_error, "sparse_cap spec needs d=<sparsity>");
    return ConstraintSet::sparse_cap(n, d);
  }
  if (kind == "l1_ball") return ConstraintSet::l1_ball(n, radius);
  if (kind == "l2_ball") return ConstraintSet::l2_ball(n, radius);
  if (kind == "ambient") return ConstraintSet::ambient(n);
  fail(ErrorCode::parse_error, "unknown set kind '" + kind + "'");
}

namespace {

void check_dim(const ConstraintSet& set, const Vector& x, const char* what) {
  if (x.size() != set.dimension())
    fail(ErrorCode::invalid_argument,
         std::string(what) + ": vector has dimension " + std::to_string(x.size()) +
             ", set has dimension " + std::to_string(set.dimension()));
}

// Indices ordered by decreasing magnitude, lowest index first among ties.
std::vector<int> order_by_magnitude(const Vector& x) {
  std::vector<int> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return std::abs(x[a]) > std::abs(x[b]); });
  return idx;
}

}  // namespace

Vector project_l1(const Vector& x, double radius) {
  if (x.lpNorm<1>() <= radius) return x;
  // Soft threshold at the level that puts the result on the l1 sphere.
  std::vector<double> a(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) a[i] = std::abs(x[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    cumsum += a[k];
    const double t = (cumsum - radius) / static_cast<double>(k + 1);
    if (k + 1 == a.size() || a[k + 1] <= t) {
      theta = t;
      break;
    }
  }
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double m = std::max(std::abs(x[i]) - theta, 0.0);
    out[i] = std::copysign(m, x[i]);
  }
  return out;
}

Vector project(const ConstraintSet& set, const Vector& x) {
  check_dim(set, x, "project");
  switch (set.kind()) {
    case SetKind::ambient:
      return x;
    case SetKind::l2_ball: {
      const double norm = x.norm();
      return norm <= set.radius() ? x : Vector(x * (set.radius() / norm));
    }
    case SetKind::l1_ball:
      return project_l1(x, set.radius());
    case SetKind::sparse_cap: {
      const auto idx = order_by_magnitude(x);
      Vector out = Vector::Zero(x.size());
      for (int k = 0; k < set.sparsity(); ++k) out[idx[k]] = x[idx[k]];
      return out;
    }
  }
  return x;
}

bool contains(const ConstraintSet& set, const Vector& x, double tol) {
  if (x.size() != set.dimension()) return false;
  switch (set.kind()) {
    case SetKind::ambient:
      return x.allFinite();
    case SetKind::l2_ball:
      return x.norm() <= set.radius() + tol;
    case SetKind::l1_ball:
      return x.lpNorm<1>() <= set.radius() + tol;
    case SetKind::sparse_cap: {
      int support = 0;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > tol) ++support;
      return support <= set.sparsity();
    }
  }
  return false;
}

namespace detail {

// Dual value  min_{λ>=0} λ·rho + r·||soft(a, λ)||_2  for a sorted descending,
// nonnegative. S1/S2 are prefix sums of a and a^2 (S[k] = sum of first k).
// The dual is convex and smooth between breakpoints; every breakpoint and every
// interior stationary point is a candidate, so the minimum over candidates is
// exact.
double l1_l2_support_sorted(std::span<const double> a, std::span<const double> S1,
                            std::span<const double> S2, double rho, double r) {
  const std::size_t n = a.size();
  if (n == 0 || a[0] == 0.0) return 0.0;
  auto value = [&](double lambda, std::size_t k) {
    // k entries of a exceed lambda
    const double kk = static_cast<double>(k);
    const double q = std::max(S2[k] - 2.0 * lambda * S1[k] + kk * lambda * lambda, 0.0);
    return lambda * rho + r * std::sqrt(q);
  };
  double best = value(0.0, n);  // λ = 0: the l2 constraint alone
  best = std::min(best, a[0] * rho);
  const double r2 = r * r;
  const double rho2 = rho * rho;
  for (std::size_t k = 1; k <= n; ++k) {
    const double upper = a[k - 1];
    const double lower = k < n ? a[k] : 0.0;
    if (upper <= lower) continue;
    best = std::min(best, value(lower, k));
    const double kk = static_cast<double>(k);
    const double c = r2 * kk - rho2;
    if (c == 0.0) continue;
    const double s1 = S1[k];
    const double disc = s1 * s1 - kk * (r2 * s1 * s1 - rho2 * S2[k]) / c;
    if (disc < 0.0) continue;
    const double root = std::sqrt(disc);
    for (double lambda : {(s1 - root) / kk, (s1 + root) / kk}) {
      if (lambda > lower && lambda < upper) best = std::min(best, value(lambda, k));
    }
  }
  return best;
}

}  // namespace detail

double l1_l2_support(const Vector& g, double rho, double r) {
  std::vector<double> a(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) a[i] = std::abs(g[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  std::vector<double> S1(a.size() + 1, 0.0), S2(a.size() + 1, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    S1[k + 1] = S1[k] + a[k];
    S2[k + 1] = S2[k] + a[k] * a[k];
  }
  return detail::l1_l2_support_sorted(a, S1, S2, rho, r);
}

double support_function_cap(const ConstraintSet& set, double r, const Vector& g) {
  require(r > 0.0, "support_function_cap: r must be positive");
  check_dim(set, g, "support_function_cap");
  switch (set.kind()) {
    case SetKind::ambient:
      return r * g.norm();
    case SetKind::l2_ball:
      return std::min(r, set.radius()) * g.norm();
    case SetKind::l1_ball:
      return l1_l2_support(g, set.radius(), r);
    case SetKind::sparse_cap: {
      Eigen::ArrayXd sq = g.array().square();
      std::partial_sort(sq.data(), sq.data() + set.sparsity(), sq.data() + sq.size(),
                        std::greater<>());
      return r * std::sqrt(sq.head(set.sparsity()).sum());
    }
  }
  return 0.0;
}

}  // namespace phaselab
