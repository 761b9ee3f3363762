#include <algorithm>
#include <cmath>
#include <random>

#include "phaselab/error.hpp"
#include "phaselab/random.hpp"
#include "phaselab/sets.hpp"

namespace phaselab {

namespace {

constexpr double kShellBand = 0.01;  // ||x||_2 within ±1% of R0

bool feasible(const ConstraintSet& set, const PackingQuery& q, const Vector& x) {
  if (!contains(set, x, 1e-9)) return false;
  if ((x - q.center).norm() > q.ball_radius * (1.0 + 1e-12)) return false;
  if (q.shell_R0) {
    const double R0 = *q.shell_R0;
    if (std::abs(x.norm() - R0) > kShellBand * R0) return false;
  }
  return true;
}

std::vector<Vector> grid_candidates(const PackingQuery& q) {
  const int n = static_cast<int>(q.center.size());
  require(n <= 2, "packing_count: grid candidates are only supported for n <= 2");
  const int per_axis =
      std::max(2, static_cast<int>(std::floor(std::pow(q.candidates, 1.0 / n) + 1e-9)));
  std::vector<Vector> out;
  std::vector<int> k(n, 0);
  while (true) {
    Vector x(n);
    for (int i = 0; i < n; ++i) {
      const double lo = q.center[i] - q.ball_radius;
      const double hi = q.center[i] + q.ball_radius;
      x[i] = lo + (hi - lo) * k[i] / (per_axis - 1);
    }
    out.push_back(std::move(x));
    int axis = n - 1;
    while (axis >= 0 && ++k[axis] == per_axis) k[axis--] = 0;
    if (axis < 0) break;
  }
  return out;
}

}  // namespace

std::vector<int> greedy_packing(std::span<const Vector> points, double separation) {
  require(separation > 0.0, "greedy_packing: separation must be positive");
  std::vector<int> chosen;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    bool ok = true;
    for (int j : chosen) {
      if ((points[i] - points[j]).norm() < separation) {
        ok = false;
        break;
      }
    }
    if (ok) chosen.push_back(i);
  }
  return chosen;
}

PackingResult packing_count(const ConstraintSet& set, const PackingQuery& q) {
  require(q.separation > 0.0, "packing_count: separation must be positive");
  require(q.candidates >= 1, "packing_count: candidates must be >= 1");
  require(q.ball_radius >= 0.0, "packing_count: ball radius must be nonnegative");
  require(q.center.size() == set.dimension(), "packing_count: center has wrong dimension");
  if (q.shell_R0) require(*q.shell_R0 >= 0.0, "packing_count: shell radius must be >= 0");

  std::vector<Vector> pool;
  if (q.mode == CandidateMode::grid) {
    for (auto& x : grid_candidates(q))
      if (feasible(set, q, x)) pool.push_back(std::move(x));
  } else {
    // Proposals uniform in the ball around the centre are used raw. The other
    // two forms push from the centre by up to 32 ball radii and project back
    // onto the set (then radially onto the shell); near a vertex of a polytope
    // raw proposals are almost never feasible and short pushes project back
    // onto the vertex itself.
    const int n = set.dimension();
    Engine engine = make_engine(q.seed, Stream::packing);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int j = 0; j < q.candidates; ++j) {
      Vector u(n);
      for (int i = 0; i < n; ++i) u[i] = gauss(engine);
      const double nu = u.norm();
      const double radius = j % 3 == 0 ? q.ball_radius * std::pow(unif(engine), 1.0 / n)
                                       : q.ball_radius * std::exp2(6.0 * unif(engine) - 1.0);
      Vector x = q.center + (nu > 0.0 ? Vector(u * (radius / nu)) : Vector::Zero(n));
      switch (j % 3) {
        case 0: break;
        case 1: x = project(set, x); break;
        case 2: {
          x = project(set, x);
          const double norm = x.norm();
          if (q.shell_R0 && norm > 0.0) x *= *q.shell_R0 / norm;
          break;
        }
      }
      if (feasible(set, q, x)) pool.push_back(std::move(x));
    }
  }

  PackingResult result;
  result.feasible_candidates = static_cast<int>(pool.size());
  for (int i : greedy_packing(pool, q.separation)) result.points.push_back(pool[i]);
  result.count = static_cast<int>(result.points.size());
  return result;
}

std::vector<Vector> shell_centers(const ConstraintSet& set, double R0, int count,
                                  std::uint64_t seed) {
  require(R0 >= 0.0, "shell_centers: R0 must be nonnegative");
  require(count >= 1, "shell_centers: count must be >= 1");
  const int n = set.dimension();
  std::vector<Vector> out;
  Vector e1 = Vector::Zero(n);
  e1[0] = R0;
  if (contains(set, e1, 1e-9)) out.push_back(e1);
  Engine engine = make_engine(seed, Stream::packing, 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int max_support = set.kind() == SetKind::sparse_cap ? set.sparsity() : n;
  std::uniform_int_distribution<int> support_size(1, max_support);
  for (int attempt = 0; attempt < 50 * count && static_cast<int>(out.size()) < count;
       ++attempt) {
    const int k = support_size(engine);
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), engine);
    Vector x = Vector::Zero(n);
    for (int i = 0; i < k; ++i) x[idx[i]] = gauss(engine);
    const double norm = x.norm();
    if (norm == 0.0) continue;
    x *= R0 / norm;
    if (contains(set, x, 1e-9)) out.push_back(std::move(x));
  }
  return out;
}

double sudakov_complexity(const ConstraintSet& set, double R0, double r,
                          const McConfig& mc) {
  require(r > 0.0, "sudakov_complexity: r must be positive");
  if (R0 == 0.0) return 0.0;  // the shell is the single point 0
  const auto centers = shell_centers(set, R0, mc.packing_centers, mc.seed);
  double best = 0.0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    PackingQuery q;
    q.center = centers[c];
    q.ball_radius = mc.packing_ball_factor * r;
    q.separation = r;
    q.shell_R0 = R0;
    q.candidates = mc.packing_candidates;
    q.seed = derive_seed(mc.seed, Stream::packing, c + 2);
    const int M = packing_count(set, q).count;
    if (M > 1) best = std::max(best, r * std::sqrt(std::log(static_cast<double>(M))));
  }
  return best;
}

MinimaxLowerRate minimax_lower_rate(const ConstraintSet& set, int N, double sigma,
                                    double R0, const McConfig& mc) {
  require(sigma >= 0.0, "minimax_lower_rate: sigma must be nonnegative");
  require(R0 >= 0.0, "minimax_lower_rate: R0 must be nonnegative");
  MinimaxLowerRate out;
  if (sigma == 0.0) return out;
  FixedPointQuery q;
  q.N = N;
  q.shell_R0 = R0;
  q.functional = Functional::tN;
  q.level = 1.0 / sigma;
  out.tN = fixed_point(set, q, mc).value;
  out.large_norm = R0 > 0.0 && R0 >= out.tN;
  if (out.large_norm) {
    q.functional = Functional::qN;
    q.level = R0 / sigma;
    out.qN = fixed_point(set, q, mc).value;
    out.rate = out.qN;
  } else {
    out.rate = out.tN;
  }
  return out;
}

}  // namespace phaselab
