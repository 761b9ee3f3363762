#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "phaselab/error.hpp"
#include "phaselab/random.hpp"
#include "phaselab/sets.hpp"

using namespace phaselab;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double a : v) x[i++] = a;
  return x;
}

Vector gaussian(Engine& e, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = g(e);
  return x;
}

// Hyperspherical angles -> unit vector.
Vector direction(const std::vector<double>& phi) {
  const int n = static_cast<int>(phi.size()) + 1;
  Vector u(n);
  double carry = 1.0;
  for (int i = 0; i < n - 1; ++i) {
    u[i] = carry * std::cos(phi[i]);
    carry *= std::sin(phi[i]);
  }
  u[n - 1] = carry;
  return u;
}

// sup <g,t> over the l1∩l2 cap by brute force over directions: along a unit u
// the farthest feasible point is min(r, rho/||u||_1)·u. Angles are gridded,
// then the grid is refined around the best few cells.
double angular_support(double rho, double r, const Vector& g, int per_axis) {
  const int n = static_cast<int>(g.size());
  if (n == 1) return std::min(r, rho) * std::abs(g[0]);
  auto value = [&](const std::vector<double>& phi) {
    const Vector u = direction(phi);
    return std::min(r, rho / u.lpNorm<1>()) * u.dot(g);
  };
  auto range = [&](int i) { return i == n - 2 ? 2 * M_PI : M_PI; };
  struct Cell {
    double v;
    std::vector<double> phi;
  };
  std::vector<Cell> cells;
  std::vector<int> k(n - 1, 0);
  while (true) {
    std::vector<double> phi(n - 1);
    for (int i = 0; i < n - 1; ++i) phi[i] = range(i) * k[i] / per_axis;
    cells.push_back({value(phi), phi});
    int a = n - 2;
    while (a >= 0 && ++k[a] == per_axis) k[a--] = 0;
    if (a < 0) break;
  }
  std::partial_sort(cells.begin(), cells.begin() + 8, cells.end(),
                    [](const Cell& a, const Cell& b) { return a.v > b.v; });
  double best = cells[0].v;
  for (int start = 0; start < 8; ++start) {
    std::vector<double> centre = cells[start].phi;
    double cv = cells[start].v;
    std::vector<double> half(n - 1);
    for (int i = 0; i < n - 1; ++i) half[i] = range(i) / per_axis;
    for (int level = 0; level < 60; ++level) {
      std::vector<int> j(n - 1, 0);
      std::vector<double> arg = centre;
      while (true) {
        std::vector<double> phi(n - 1);
        for (int i = 0; i < n - 1; ++i) phi[i] = centre[i] - half[i] + half[i] * j[i] / 4.0;
        const double v = value(phi);
        if (v > cv) {
          cv = v;
          arg = phi;
        }
        int a = n - 2;
        while (a >= 0 && ++j[a] == 9) j[a--] = 0;
        if (a < 0) break;
      }
      centre = arg;
      for (double& h : half) h *= 0.6;
    }
    best = std::max(best, cv);
  }
  return best;
}

// sup over supports of size d of r·||g_S||, by enumeration.
double enumerate_sparse(const Vector& g, int d, double r) {
  const int n = static_cast<int>(g.size());
  double best = 0.0;
  std::vector<int> c(d);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    double s = 0.0;
    for (int i : c) s += g[i] * g[i];
    best = std::max(best, r * std::sqrt(s));
    int i = d - 1;
    while (i >= 0 && c[i] == n - d + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < d; ++j) c[j] = c[j - 1] + 1;
  }
  return best;
}

Vector random_feasible(const ConstraintSet& set, Engine& e) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector z = gaussian(e, set.dimension()) * (3.0 * u(e));
  z = project(set, z);
  // Pull some points strictly inside.
  if (set.kind() != SetKind::sparse_cap && u(e) < 0.5) z *= u(e);
  return z;
}

}  // namespace

TEST_CASE("projection examples") {
  const auto l1 = ConstraintSet::l1_ball(2, 1.0);
  CHECK(project(l1, vec({0.2, -0.1})) == vec({0.2, -0.1}));
  const Vector p = project(l1, vec({1.0, 1.0}));
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));
  CHECK(project(ConstraintSet::sparse_cap(2, 1), vec({3, -4})) == vec({0, -4}));
  CHECK(project(ConstraintSet::sparse_cap(3, 1), vec({2, -2, 1})) == vec({2, 0, 0}));
  CHECK_THROWS_AS(project(l1, vec({1, 2, 3})), Error);
}

TEST_CASE("l1 projection matches a grid search in 2-D") {
  const auto l1 = ConstraintSet::l1_ball(2, 1.0);
  const Vector x = vec({1.0, 1.0});
  double best = INFINITY;
  for (int i = 0; i <= 2000; ++i)
    for (int j = 0; j <= 2000; ++j) {
      const Vector z = vec({-1 + i / 1000.0, -1 + j / 1000.0});
      if (z.lpNorm<1>() <= 1.0 + 1e-12) best = std::min(best, (x - z).norm());
    }
  CHECK((x - project(l1, x)).norm() == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("projection is optimal and idempotent") {
  Engine e = make_engine(5, Stream::check);
  std::uniform_int_distribution<int> dim(1, 6), kind(0, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int failures = 0;
  for (int pair = 0; pair < 10000; ++pair) {
    const int n = dim(e);
    ConstraintSet set = ConstraintSet::ambient(n);
    switch (kind(e)) {
      case 0: set = ConstraintSet::sparse_cap(n, std::uniform_int_distribution<int>(1, n)(e)); break;
      case 1: set = ConstraintSet::l1_ball(n, 0.2 + 2 * u(e)); break;
      case 2: set = ConstraintSet::l2_ball(n, 0.2 + 2 * u(e)); break;
      default: break;
    }
    const Vector x = gaussian(e, n) * 2.0;
    const Vector p = project(set, x);
    if (!contains(set, p, 1e-9)) ++failures;
    if ((project(set, p) - p).norm() > 1e-12) ++failures;
    const double dp = (x - p).norm();
    for (int k = 0; k < 1000; ++k)
      if (dp > (x - random_feasible(set, e)).norm() + 1e-9) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("support function examples") {
  CHECK(support_function_cap(ConstraintSet::sparse_cap(4, 2), 1.0, vec({3, 1, -2, 0})) ==
        doctest::Approx(std::sqrt(13.0)));
  const auto l1 = ConstraintSet::l1_ball(2, 1.0);
  CHECK(support_function_cap(l1, 0.5, vec({2, 1})) == doctest::Approx(0.5 * std::sqrt(5.0)));
  CHECK(support_function_cap(l1, 10.0, vec({2, 1})) == doctest::Approx(2.0));
  CHECK_THROWS_AS(support_function_cap(l1, 0.0, vec({2, 1})), Error);
  CHECK_THROWS_AS(support_function_cap(l1, -1.0, vec({2, 1})), Error);
}

TEST_CASE("support function agrees with brute force") {
  Engine e = make_engine(6, Stream::check);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 1; n <= 4; ++n) {
    const int trials = n <= 2 ? 40 : (n == 3 ? 15 : 6);
    for (int k = 0; k < trials; ++k) {
      const Vector g = gaussian(e, n);
      const double r = 0.1 + 1.5 * u(e);
      const double rho = 0.3 + 1.5 * u(e);
      const auto l1 = ConstraintSet::l1_ball(n, rho);
      const double exact = support_function_cap(l1, r, g);
      const double grid = angular_support(rho, r, g, n <= 2 ? 360 : (n == 3 ? 60 : 24));
      CHECK(grid <= exact + 1e-7);
      CHECK(exact - grid <= 1e-4);

      const int d = std::uniform_int_distribution<int>(1, n)(e);
      CHECK(support_function_cap(ConstraintSet::sparse_cap(n, d), r, g) ==
            doctest::Approx(enumerate_sparse(g, d, r)).epsilon(1e-12));
    }
  }
}

TEST_CASE("support function is positively homogeneous in g") {
  Engine e = make_engine(7, Stream::check);
  for (const auto& set : {ConstraintSet::l1_ball(30, 1.3), ConstraintSet::sparse_cap(30, 4),
                          ConstraintSet::l2_ball(30, 0.7), ConstraintSet::ambient(30)}) {
    for (int k = 0; k < 20; ++k) {
      const Vector g = gaussian(e, 30);
      for (double lam : {0.1, 2.0, 17.0})
        CHECK(support_function_cap(set, 0.4, lam * g) ==
              doctest::Approx(lam * support_function_cap(set, 0.4, g)).epsilon(1e-12));
    }
  }
}

TEST_CASE("l1 support by dual search equals the closed-form extremes") {
  Engine e = make_engine(8, Stream::check);
  const Vector g = gaussian(e, 50);
  // r tiny: the l2 ball binds. r huge: the l1 ball binds at a vertex.
  CHECK(l1_l2_support(g, 1.0, 1e-6) == doctest::Approx(1e-6 * g.norm()));
  CHECK(l1_l2_support(g, 1.0, 1e6) == doctest::Approx(g.cwiseAbs().maxCoeff()));
}

TEST_CASE("mean width Monte Carlo") {
  SUBCASE("singleton direction") {
    const WidthEstimate w = mean_width_mc(ConstraintSet::sparse_cap(1, 1), 1.0, 10000, 3);
    CHECK(std::abs(w.value - std::sqrt(2.0 / M_PI)) <= 4 * w.std_error);
    CHECK(w.samples == 10000);
  }
  SUBCASE("l2 ball equals the chi mean") {
    const WidthEstimate w = mean_width_mc(ConstraintSet::l2_ball(2, 1.0), 1.0, 10000, 4);
    CHECK(std::abs(w.value - std::sqrt(M_PI / 2)) <= 4 * w.std_error);
    for (int n : {1, 2, 5, 30})
      CHECK(expected_gaussian_norm(n) ==
            doctest::Approx(std::sqrt(2.0) * std::exp(std::lgamma((n + 1) / 2.0) -
                                                      std::lgamma(n / 2.0))));
  }
  SUBCASE("monotone in r, value/r nonincreasing") {
    for (const auto& set : {ConstraintSet::l1_ball(40, 1.0), ConstraintSet::sparse_cap(40, 3)}) {
      double prev = 0.0, prev_ratio = INFINITY;
      for (double r = 1e-4; r < 5.0; r *= 1.7) {
        const WidthEstimate w = mean_width_mc(set, r, 500, 9);
        CHECK(w.value >= prev - 4 * w.std_error);
        CHECK(w.value / r <= prev_ratio * (1 + 1e-12) + 4 * w.std_error / r);
        prev = w.value;
        prev_ratio = w.value / r;
      }
      CHECK(mean_width_mc(set, 1e-9, 200, 1).value < 1e-7);
    }
  }
  CHECK_THROWS_AS(mean_width_mc(ConstraintSet::l1_ball(3, 1.0), 1.0, 1, 1), Error);
}

TEST_CASE("closed-form widths") {
  CHECK(mean_width_closed_form(ConstraintSet::l1_ball(100, 1.0), 0.05) == doctest::Approx(0.5));
  CHECK(mean_width_closed_form(ConstraintSet::l1_ball(100, 1.0), 1.0) ==
        doctest::Approx(std::sqrt(1 + std::log(100.0))));
  CHECK(mean_width_closed_form(ConstraintSet::sparse_cap(1024, 16), 1.0) ==
        doctest::Approx(9.085).epsilon(1e-3));
  try {
    mean_width_closed_form(ConstraintSet::l2_ball(3, 1.0), 1.0);
    FAIL("expected unsupported_set");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::unsupported_set);
  }
}

TEST_CASE("closed form and Monte Carlo agree up to constants") {
  for (const auto& set : {ConstraintSet::l1_ball(200, 1.0), ConstraintSet::sparse_cap(200, 5)})
    for (double r : {0.01, 0.05, 0.1, 0.3, 1.0, 3.0}) {
      const double ratio = mean_width_mc(set, r, 1000, 2).value / mean_width_closed_form(set, r);
      CHECK(ratio >= 0.25);
      CHECK(ratio <= 4.0);
    }
}

TEST_CASE("fixed points") {
  SUBCASE("display for r_N* on the l1 ball") {
    CHECK(l1_rN_display(100000, 100, 1.0) == doctest::Approx(0.2628).epsilon(1e-3));
    CHECK(l1_rN_display(50, 100, 1.0) == 0.0);
  }
  SUBCASE("ambient space with huge N") {
    FixedPointQuery q;
    q.functional = Functional::rN;
    q.level = 1.0;
    q.N = 10000;
    CHECK(fixed_point(ConstraintSet::ambient(20), q).value == 0.0);
    q.N = 4;
    CHECK(fixed_point(ConstraintSet::ambient(20), q).value == INFINITY);
  }
  SUBCASE("s_N* small-n branch") {
    const int n = 10, N = 400;
    const double eta = 1.0;
    CHECK(n <= eta * std::sqrt(double(N)));
    CHECK(l1_sN_display(n, N, eta) == doctest::Approx(std::sqrt(n / (eta * eta * N))));
    FixedPointQuery q;
    q.functional = Functional::sN;
    q.level = eta;
    q.N = N;
    q.backend = Backend::closed_form;
    CHECK(fixed_point(ConstraintSet::l1_ball(n, 1.0), q).value ==
          doctest::Approx(std::sqrt(n / (eta * eta * N))).epsilon(1e-9));
  }
  SUBCASE("defining property of the infimum") {
    McConfig mc;
    mc.gaussian_draws = 800;
    for (auto f : {Functional::rN, Functional::sN, Functional::vN, Functional::r2}) {
      FixedPointQuery q;
      q.functional = f;
      q.level = 1.0;
      q.N = 300;
      q.shell_R0 = 1.0;
      const auto set = ConstraintSet::l1_ball(500, 1.0);
      const FixedPointResult r = fixed_point(set, q, mc);
      REQUIRE(r.value > 0.0);
      const int p = functional_power(f);
      auto holds = [&](double x) {
        return complexity_profile(set, q, mc, x) <= q.level * std::pow(x, p) * std::sqrt(q.N);
      };
      CHECK(holds(r.value));
      CHECK_FALSE(holds(0.9 * r.value));
      CHECK(r.bracket_width <= 1e-9 * r.value);
    }
  }
  SUBCASE("validation") {
    FixedPointQuery q;
    q.level = 0.0;
    q.N = 10;
    CHECK_THROWS_AS(fixed_point(ConstraintSet::l1_ball(5, 1.0), q), Error);
    q.level = 1.0;
    q.backend = Backend::closed_form;
    try {
      fixed_point(ConstraintSet::l2_ball(5, 1.0), q);
      FAIL("expected unsupported_set");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::unsupported_set);
    }
  }
}

TEST_CASE("contains") {
  CHECK(contains(ConstraintSet::l1_ball(3, 1.0), vec({0.3, 0.3, 0.3}), 0.0));
  CHECK(contains(ConstraintSet::sparse_cap(3, 1), vec({1, 1e-15, 0}), 1e-12));
  CHECK_FALSE(contains(ConstraintSet::l1_ball(2, 1.0), vec({0.8, 0.3}), 0.0));
}

TEST_CASE("set parsing round-trips") {
  for (const char* s : {"sparse_cap:n=64,d=4", "l1_ball:n=100,radius=1", "l2_ball:n=3,radius=0.25",
                        "ambient:n=5"}) {
    const ConstraintSet set = parse_set(s);
    CHECK(parse_set(set.describe()) == set);
  }
  CHECK_THROWS_AS(parse_set("sparse_cap:n=3,d=4"), Error);
  CHECK_THROWS_AS(parse_set("l1_ball:n=3,radius=0"), Error);
  CHECK_THROWS_AS(parse_set("cube:n=3"), Error);
}

TEST_CASE("packing examples") {
  SUBCASE("two points at distance one") {
    const std::vector<Vector> pts{vec({0, 0}), vec({1, 0})};
    CHECK(greedy_packing(pts, 0.5).size() == 2);
  }
  SUBCASE("segment, exhaustive candidates") {
    PackingQuery q;
    q.center = vec({0});
    q.ball_radius = 1.0;
    q.separation = 0.5;
    q.candidates = 401;
    q.mode = CandidateMode::grid;
    CHECK(packing_count(ConstraintSet::l1_ball(1, 1.0), q).count == 5);
  }
  SUBCASE("separation beyond the diameter") {
    PackingQuery q;
    q.center = Vector::Zero(3);
    q.ball_radius = 0.4;
    q.separation = 0.81;
    q.candidates = 3000;
    CHECK(packing_count(ConstraintSet::ambient(3), q).count <= 1);
  }
  SUBCASE("empty feasible region") {
    PackingQuery q;
    q.center = vec({5, 5});
    q.ball_radius = 0.1;
    q.candidates = 200;
    CHECK(packing_count(ConstraintSet::l1_ball(2, 1.0), q).count == 0);
  }
}

namespace {

// Maximum separated subset by enumeration over all subsets.
int exhaustive_packing(const std::vector<Vector>& pts, double sep) {
  const int m = static_cast<int>(pts.size());
  int best = 0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    const int size = std::popcount(mask);
    if (size <= best) continue;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i)
      for (int j = i + 1; j < m && ok; ++j)
        if ((mask >> i & 1) && (mask >> j & 1) && (pts[i] - pts[j]).norm() < sep) ok = false;
    if (ok) best = size;
  }
  return best;
}

}  // namespace

TEST_CASE("greedy packing is separated and never beats exhaustive search") {
  Engine e = make_engine(10, Stream::check);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = 1 + trial % 2;
    std::vector<Vector> pts;
    for (int k = 0; k < 12; ++k) {
      Vector p(dim);
      for (int i = 0; i < dim; ++i) p[i] = u(e);
      pts.push_back(p);
    }
    const double sep = 0.2 + 0.4 * (u(e) + 1);
    const auto chosen = greedy_packing(pts, sep);
    for (std::size_t i = 0; i < chosen.size(); ++i)
      for (std::size_t j = i + 1; j < chosen.size(); ++j)
        CHECK((pts[chosen[i]] - pts[chosen[j]]).norm() >= sep);
    CHECK(static_cast<int>(chosen.size()) <= exhaustive_packing(pts, sep));
  }
  // Segment of length 2: at most floor(2/sep) + 1 points.
  for (double sep : {0.3, 0.5, 0.7, 1.1}) {
    PackingQuery q;
    q.center = vec({0});
    q.separation = sep;
    q.candidates = 3000;
    const PackingResult r = packing_count(ConstraintSet::l1_ball(1, 1.0), q);
    CHECK(r.count <= static_cast<int>(std::floor(2 / sep)) + 1);
    for (std::size_t i = 0; i < r.points.size(); ++i)
      for (std::size_t j = i + 1; j < r.points.size(); ++j)
        CHECK((r.points[i] - r.points[j]).norm() >= sep);
  }
}

TEST_CASE("shell-restricted packing stays on the shell") {
  PackingQuery q;
  q.center = Vector::Unit(8, 0);
  q.ball_radius = 0.6;
  q.separation = 0.2;
  q.shell_R0 = 1.0;
  q.candidates = 1500;
  const PackingResult r = packing_count(ConstraintSet::sparse_cap(8, 2), q);
  CHECK(r.count >= 2);
  for (const auto& p : r.points) {
    CHECK(std::abs(p.norm() - 1.0) <= 0.01 + 1e-12);
    CHECK((p - q.center).norm() <= 0.6 + 1e-9);
  }
}

TEST_CASE("packing lower rate") {
  McConfig mc;
  mc.packing_candidates = 600;
  const auto set = ConstraintSet::l1_ball(16, 1.0);
  const MinimaxLowerRate m = minimax_lower_rate(set, 1024, 0.5, 1.0, mc);
  CHECK(m.rate > 0.0);
  CHECK(m.rate < 1.0);
  CHECK(minimax_lower_rate(set, 1024, 0.0, 1.0, mc).rate == 0.0);
  // More noise, slower rate.
  CHECK(minimax_lower_rate(set, 1024, 2.0, 1.0, mc).rate >= m.rate);
}
