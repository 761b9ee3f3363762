// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "phaselab/empirics.hpp"
#include "phaselab/erm.hpp"
#include "phaselab/experiment.hpp"
#include "phaselab/lemma_checks.hpp"
#include "phaselab/predict.hpp"
#include "phaselab/random.hpp"
#include "phaselab/sets.hpp"

using namespace phaselab;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig sparse_sweep() {
  ExperimentConfig c;
  c.set = ConstraintSet::sparse_cap(64, 4);
  c.x0 = {SignalKind::random_sparse, {}, 4, 1.0};
  c.solver = SolverKind::pgd;
  c.solver_config.restarts = 8;
  c.trials_per_cell = 50;
  c.master_seed = 8675309;
  return c;
}

std::string cells(const ResultsTable& t, bool sign) {
  std::string out;
  for (const auto& s : t.summaries)
    out += fmt(" (N=%d s=%g: %.4g, %d nc)", s.N, s.sigma,
               sign ? s.median_sign_error : s.median_product_error, s.non_converged);
  return out;
}

Verdict exact_recovery() {
  ExperimentConfig c = sparse_sweep();
  const int N = static_cast<int>(std::ceil(10 * 4 * std::log(std::numbers::e * 64 / 4)));
  c.N_grid = {N};
  c.sigma_grid = {0.0};
  c.trials_per_cell = 100;
  c.solver = SolverKind::oracle;
  c.solver_config.restarts = 1;
  const auto t0 = std::chrono::steady_clock::now();
  const ResultsTable t = run_experiment(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  int hits = 0;
  for (const auto& r : t.rows) hits += r.sign_error <= 1e-6;
  return {hits >= 95 && secs <= 300,
          fmt("N=%d, %d/100 trials with sign_error <= 1e-6, %.1fs", N, hits, secs)};
}

Verdict n_scaling() {
  ExperimentConfig c = sparse_sweep();
  c.N_grid = {512, 1024, 2048, 4096, 8192};
  c.sigma_grid = {0.5};
  const auto t0 = std::chrono::steady_clock::now();
  const ResultsTable t = run_experiment(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const SlopeFit f = fit_slope(t, SlopeAxis::N, SlopeMetric::median_product_error);
  return {f.slope >= -0.65 && f.slope <= -0.35 && secs <= 1800,
          fmt("slope %.3f (r2 %.3f), %.1fs;", f.slope, f.r_squared, secs) + cells(t, false)};
}

Verdict sigma_linearity() {
  ExperimentConfig c = sparse_sweep();
  c.N_grid = {4096};
  c.sigma_grid = {0.1, 0.2, 0.4, 0.8};
  const ResultsTable t = run_experiment(c);
  const SlopeFit f = fit_slope(t, SlopeAxis::sigma, SlopeMetric::median_product_error);
  return {f.slope >= 0.75 && f.slope <= 1.25,
          fmt("slope %.3f (r2 %.3f);", f.slope, f.r_squared) + cells(t, false)};
}

Verdict small_signal() {
  ExperimentConfig c = sparse_sweep();
  c.N_grid = {4096};
  c.sigma_grid = {0.1, 0.2, 0.4, 0.8};
  c.x0.R0 = 0.0;
  const ResultsTable t = run_experiment(c);
  const SlopeFit f = fit_slope(t, SlopeAxis::sigma, SlopeMetric::median_sign_error);
  return {f.slope >= 0.35 && f.slope <= 0.65,
          fmt("slope %.3f (r2 %.3f);", f.slope, f.r_squared) + cells(t, true)};
}

Verdict width_calibration() {
  // {±e1} is the 1-D cap; its width is E|g|.
  const WidthEstimate w = mean_width_mc(ConstraintSet::ambient(1), 1.0, 10000, 31);
  const double target = std::sqrt(2.0 / std::numbers::pi);
  const double z = std::abs(w.value - target) / w.std_error;
  bool pass = z <= 4.0;
  std::string detail = fmt("E|g| %.4f vs %.4f (%.2f SE);", w.value, target, z);
  double lo = INFINITY, hi = 0.0;
  for (const auto& set : {ConstraintSet::l1_ball(100, 1.0), ConstraintSet::l1_ball(1000, 1.0),
                          ConstraintSet::sparse_cap(64, 4), ConstraintSet::sparse_cap(256, 16)}) {
    for (double r : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0}) {
      const double ratio =
          mean_width_mc(set, r, 2000, 32).value / mean_width_closed_form(set, r);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  pass = pass && lo >= 0.25 && hi <= 4.0;
  return {pass, detail + fmt(" mc/closed over 24 (set, r) pairs in [%.3f, %.3f]", lo, hi)};
}

Verdict fixed_point_consistency() {
  struct Combo {
    Functional f;
    int n, N;
    double level;
  };
  // Five combinations on each side of the branch switch of every display:
  // r at n = Q^2 N, s at n = eta sqrt(N), v at n = zeta^(2/3) N^(1/3).
  const Combo combos[] = {
      {Functional::rN, 1000, 100, 1},  {Functional::rN, 4096, 64, 1},
      {Functional::rN, 200, 100, 0.5}, {Functional::rN, 2000, 200, 1},
      {Functional::rN, 800, 50, 2},    {Functional::rN, 50, 400, 1},
      {Functional::rN, 100, 100, 1},   {Functional::rN, 64, 256, 0.5},
      {Functional::rN, 30, 100, 1},    {Functional::rN, 10, 1000, 0.1},
      {Functional::sN, 200, 400, 1},   {Functional::sN, 1000, 1000, 0.5},
      {Functional::sN, 500, 100, 1},   {Functional::sN, 64, 4096, 0.5},
      {Functional::sN, 300, 900, 2},   {Functional::sN, 10, 400, 1},
      {Functional::sN, 8, 1000, 1},    {Functional::sN, 16, 4096, 1},
      {Functional::sN, 20, 400, 5},    {Functional::sN, 4, 100, 2},
      {Functional::vN, 200, 400, 1},   {Functional::vN, 500, 1000, 0.2},
      {Functional::vN, 1000, 4096, 1}, {Functional::vN, 64, 512, 1},
      {Functional::vN, 100, 100, 10},  {Functional::vN, 4, 1000, 2},
      {Functional::vN, 10, 100, 10},   {Functional::vN, 8, 4096, 1},
      {Functional::vN, 5, 512, 2},     {Functional::vN, 3, 200, 1},
  };
  int bad = 0, zeros = 0;
  double lo = INFINITY, hi = 0.0;
  std::string worst;
  for (const auto& c : combos) {
    const auto set = ConstraintSet::l1_ball(c.n, 1.0);
    FixedPointQuery q;
    q.functional = c.f;
    q.level = c.level;
    q.N = c.N;
    q.backend = Backend::closed_form;
    const double closed = fixed_point(set, q).value;
    q.backend = Backend::monte_carlo;
    const double mc = fixed_point(set, q).value;
    if (closed == 0.0 || mc == 0.0) {
      // the zero branch must be reproduced exactly
      if (closed == mc) ++zeros;
      else ++bad;
      continue;
    }
    const double ratio = mc / closed;
    if (ratio < 0.25 || ratio > 4.0) {
      ++bad;
      worst += fmt(" %s(n=%d,N=%d,level=%g)=%.3f", to_string(c.f).c_str(), c.n, c.N, c.level,
                   ratio);
    }
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {bad == 0, fmt("30 combinations, ratio in [%.3f, %.3f], %d both zero, %d outside", lo,
                        hi, zeros, bad) +
                        worst};
}

Verdict lemma_suite() {
  CheckOptions opts;
  opts.norm_triples = 1'000'000;
  opts.vectors = 1000;
  opts.seed = 0xacce97;  // not the calibration seed
  bool pass = true;
  std::string detail;
  for (const auto& o : run_check_suite("all", opts)) {
    pass = pass && o.passed;
    detail += " [" + o.name + (o.passed ? " ok: " : " FAILED: ") + o.detail + "]";
  }
  return {pass, detail};
}

Verdict solver_plumbing() {
  Engine e(2718);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto vec = [&](int n) {
    Vector v(n);
    for (auto& x : v) x = gauss(e);
    return v;
  };
  double fd_worst = 0.0, identity_worst = 0.0;
  int oracle_losses = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 9;
    const Vector x0 = vec(n);
    const PhaseSample s = generate_sample(x0, {EnsembleKind::standard_gaussian, n},
                                          {NoiseKind::gaussian, 0.5}, 20 + k, 5000 + k);
    const Vector x = vec(n);
    const Vector g = gradient(s, x);
    Vector fd(n);
    for (int i = 0; i < n; ++i) {
      Vector p = x, m = x;
      p[i] += 1e-5;
      m[i] -= 1e-5;
      fd[i] = (objective(s, p) - objective(s, m)) / 2e-5;
    }
    fd_worst = std::max(fd_worst, (g - fd).norm() / g.norm());

    const auto parts = excess_loss_parts(s, x, x0);
    const double lhs = objective(s, x) - objective(s, x0);
    identity_worst = std::max(identity_worst,
                              std::abs(lhs - (parts.quadratic - parts.multiplier)) /
                                  std::max(std::abs(lhs), parts.quadratic));
  }
  for (int k = 0; k < 100; ++k) {
    const int n = 10;
    Vector x0 = Vector::Zero(n);
    x0[k % n] = gauss(e);
    x0[(k * 7 + 3) % n] += gauss(e);
    const PhaseSample s = generate_sample(x0, {EnsembleKind::standard_gaussian, n},
                                          {NoiseKind::gaussian, 0.05 * (k % 5)}, 30, 6000 + k);
    const auto set = ConstraintSet::sparse_cap(n, 2);
    SolverConfig c;
    c.restarts = 2;
    if (solve_oracle(s, set, c, k).objective_value > solve_pgd(s, set, c, k).objective_value)
      ++oracle_losses;
  }
  return {fd_worst <= 1e-5 && identity_worst <= 1e-10 && oracle_losses == 0,
          fmt("finite differences %.2e, excess-loss identity %.2e, oracle > pgd on %d/100",
              fd_worst, identity_worst, oracle_losses)};
}

Verdict minimax_sandwich() {
  const int n = 64, N = 4096;
  const double sigma = 0.5, R0 = 1.0;
  ExperimentConfig c;
  c.set = ConstraintSet::l1_ball(n, 1.0);
  c.x0 = {SignalKind::random_sparse, {}, 1, R0};
  c.N_grid = {N};
  c.sigma_grid = {sigma};
  c.trials_per_cell = 50;
  c.solver_config.restarts = 8;
  c.master_seed = 1618;
  const ResultsTable t = run_experiment(c);
  const double observed = t.summaries[0].median_sign_error;
  const RatePrediction upper = predict_rate_l1(n, N, sigma, R0);
  const MinimaxLowerRate lower = minimax_lower_rate(c.set, N, sigma, R0);
  const bool pass = observed >= lower.rate / 32 && observed <= 32 * upper.rate;
  return {pass, fmt("lower %.4g (%s) <= observed %.4g <= upper %.4g (%s), factor 32", lower.rate,
                    lower.large_norm ? "qN" : "tN", observed, upper.rate,
                    to_string(upper.regime).c_str())};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"noise-free exact recovery", exact_recovery},
      {"N-scaling of the product error", n_scaling},
      {"sigma-linearity of the product error", sigma_linearity},
      {"small-signal exponent halving", small_signal},
      {"width estimator calibration", width_calibration},
      {"fixed-point consistency", fixed_point_consistency},
      {"deterministic lemma suite", lemma_suite},
      {"solver correctness plumbing", solver_plumbing},
      {"minimax sandwich", minimax_sandwich},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", index, name,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
