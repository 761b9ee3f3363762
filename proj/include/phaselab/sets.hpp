#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phaselab/types.hpp"

namespace phaselab {

enum class SetKind { sparse_cap, l1_ball, l2_ball, ambient };

// The model T. sparse_cap is the (nonconvex) cone of d-sparse vectors; the
// balls are centred at the origin.
class ConstraintSet {
public:
  static ConstraintSet sparse_cap(int n, int d);
  static ConstraintSet l1_ball(int n, double radius);
  static ConstraintSet l2_ball(int n, double radius);
  static ConstraintSet ambient(int n);

  SetKind kind() const { return kind_; }
  int dimension() const { return n_; }
  int sparsity() const { return d_; }
  double radius() const { return radius_; }
  bool bounded() const { return kind_ == SetKind::l1_ball || kind_ == SetKind::l2_ball; }
  // Euclidean diameter; +inf for the cones.
  double diameter() const;

  std::string describe() const;

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;

private:
  ConstraintSet(SetKind kind, int n, int d, double radius)
      : kind_(kind), n_(n), d_(d), radius_(radius) {}

  SetKind kind_;
  int n_;
  int d_;
  double radius_;
};

std::string to_string(SetKind kind);

// Parses "sparse_cap:n=64,d=4", "l1_ball:n=100,radius=1", "l2_ball:n=3",
// "ambient:n=5".
ConstraintSet parse_set(const std::string& text);

// Euclidean projection; for sparse_cap ties keep the lowest indices.
Vector project(const ConstraintSet& set, const Vector& x);

// Projection of x onto {||t||_1 <= radius}.
Vector project_l1(const Vector& x, double radius);

bool contains(const ConstraintSet& set, const Vector& x, double tol);

// sup over t in set ∩ r·B_2 of |<g, t>|, computed exactly.
double support_function_cap(const ConstraintSet& set, double r, const Vector& g);

// sup over {||t||_1 <= rho, ||t||_2 <= r} of <g, t> by dual breakpoint search.
double l1_l2_support(const Vector& g, double rho, double r);

struct WidthEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int samples = 0;
};

// Monte Carlo estimate of the gaussian mean width of set ∩ r·B_2.
WidthEstimate mean_width_mc(const ConstraintSet& set, double r,
                            int gaussian_draws, std::uint64_t seed);

// Closed-form width equivalents with unit constants (sparse_cap and l1_ball).
double mean_width_closed_form(const ConstraintSet& set, double r);

// E||g||_2 for g standard gaussian in R^n.
double expected_gaussian_norm(int n);

// Fixed-point functionals -----------------------------------------------------

enum class Functional { r0, r2, rN, sN, vN, qN, tN };
enum class Backend { closed_form, monte_carlo };

std::string to_string(Functional f);
Functional parse_functional(const std::string& name);
std::string to_string(Backend b);
Backend parse_backend(const std::string& name);

struct FixedPointQuery {
  Functional functional = Functional::rN;
  double level = 1.0;
  int N = 1;
  // Shell radius for qN/tN; for r0/r2 on convex sets it is the signal norm
  // used by the localized surrogate (0 selects the small-norm branch).
  double shell_R0 = 0.0;
  Backend backend = Backend::monte_carlo;
};

struct McConfig {
  int gaussian_draws = 2000;
  std::uint64_t seed = 1;
  // Packing backend (qN, tN).
  int packing_candidates = 2000;
  int packing_centers = 4;
  double packing_ball_factor = 2.0;
};

struct FixedPointResult {
  double value = 0.0;
  double bracket_width = 0.0;
  int power = 1;
  // Non-fatal diagnostics such as a non-monotone Monte Carlo profile.
  std::vector<std::string> warnings;
};

// The complexity profile Φ(r) whose fixed point is sought, and its power p.
int functional_power(Functional f);
double complexity_profile(const ConstraintSet& set, const FixedPointQuery& query,
                          const McConfig& mc, double r);

// inf{r > 0 : Φ(r) <= level · r^p · sqrt(N)}; 0 when the condition holds over
// the whole search range and +inf when it never holds.
FixedPointResult fixed_point(const ConstraintSet& set, const FixedPointQuery& query,
                             const McConfig& mc = {});

// Asymptotic displays for the unit l1 ball with unit constants.
double l1_rN_display(int n, int N, double Q);
double l1_sN_display(int n, int N, double eta);
double l1_vN_display(int n, int N, double zeta);

// Packing ----------------------------------------------------------------------

enum class CandidateMode { random, grid };

struct PackingQuery {
  Vector center;
  double ball_radius = 1.0;
  double separation = 0.5;
  std::optional<double> shell_R0;
  int candidates = 1000;
  CandidateMode mode = CandidateMode::random;
  std::uint64_t seed = 1;
};

struct PackingResult {
  int count = 0;
  std::vector<Vector> points;
  int feasible_candidates = 0;
};

// Greedy maximal separated subset (distance >= separation), in input order.
std::vector<int> greedy_packing(std::span<const Vector> points, double separation);

// Lower bound on M(set ∩ ball ∩ shell, separation·B_2) from sampled candidates.
PackingResult packing_count(const ConstraintSet& set, const PackingQuery& query);

// Feasible points on the shell ||x||_2 = R0 used as packing centres.
std::vector<Vector> shell_centers(const ConstraintSet& set, double R0, int count,
                                  std::uint64_t seed);

// C(R0, r) = sup over centres of r·sqrt(log M) at separation r inside a ball of
// radius ball_factor·r.
double sudakov_complexity(const ConstraintSet& set, double R0, double r,
                          const McConfig& mc);

// Packing lower rate: q_N*(R0/sigma) if R0 >= t_N*(1/sigma), else
// t_N*(1/sigma).
struct MinimaxLowerRate {
  double rate = 0.0;
  double qN = 0.0;
  double tN = 0.0;
  bool large_norm = true;
};
MinimaxLowerRate minimax_lower_rate(const ConstraintSet& set, int N, double sigma,
                                    double R0, const McConfig& mc = {});

}  // namespace phaselab
