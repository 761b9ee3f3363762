#include "phaselab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <thread>
#include <tuple>

#include "phaselab/error.hpp"
#include "phaselab/random.hpp"

namespace phaselab {

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  auto same_vec = [](const Vector& u, const Vector& v) {
    return u.size() == v.size() && (u.size() == 0 || u == v);
  };
  // Only the signal fields that the kind actually reads take part.
  bool same_x0 = a.x0.kind == b.x0.kind;
  if (same_x0 && a.x0.kind == SignalKind::explicit_vector)
    same_x0 = same_vec(a.x0.values, b.x0.values);
  if (same_x0 && a.x0.kind != SignalKind::explicit_vector) same_x0 = a.x0.R0 == b.x0.R0;
  if (same_x0 && a.x0.kind == SignalKind::random_sparse)
    same_x0 = a.x0.sparsity == b.x0.sparsity;
  return a.set == b.set && a.ensemble == b.ensemble && a.noise == b.noise && same_x0 &&
         a.N_grid == b.N_grid &&
         a.sigma_grid == b.sigma_grid && a.R0_grid == b.R0_grid &&
         a.trials_per_cell == b.trials_per_cell && a.solver == b.solver &&
         a.solver_config == b.solver_config && a.master_seed == b.master_seed &&
         a.success_tolerance == b.success_tolerance;
}

void validate(const ExperimentConfig& c) {
  require(!c.N_grid.empty(), "experiment: N_grid must not be empty");
  require(!c.sigma_grid.empty(), "experiment: sigma_grid must not be empty");
  require(c.trials_per_cell >= 1, "experiment: trials_per_cell must be >= 1");
  for (int N : c.N_grid) require(N >= 1, "experiment: every N must be >= 1");
  for (double s : c.sigma_grid)
    require(s >= 0.0 && std::isfinite(s), "experiment: every sigma must be finite and >= 0");
  for (double r : c.R0_grid)
    require(r >= 0.0 && std::isfinite(r), "experiment: every R0 must be finite and >= 0");
  require(c.success_tolerance >= 0.0, "experiment: success_tolerance must be >= 0");
  const int n = c.set.dimension();
  switch (c.x0.kind) {
    case SignalKind::explicit_vector:
      require(c.x0.values.size() == n, "experiment: explicit x0 has the wrong dimension");
      require(contains(c.set, c.x0.values, 1e-9), "experiment: explicit x0 is not in the set");
      require(c.R0_grid.empty(), "experiment: R0_grid needs a random x0");
      break;
    case SignalKind::random_sparse:
      require(c.x0.sparsity >= 1 && c.x0.sparsity <= n,
              "experiment: x0 sparsity must lie in [1, n]");
      [[fallthrough]];
    case SignalKind::random_on_shell:
      require(c.x0.R0 >= 0.0 && std::isfinite(c.x0.R0), "experiment: x0 R0 must be >= 0");
      break;
  }
  validate(c.solver_config);
}

Vector draw_signal(const ExperimentConfig& config, double R0, std::uint64_t seed) {
  const int n = config.set.dimension();
  if (config.x0.kind == SignalKind::explicit_vector) return config.x0.values;
  Engine engine = make_engine(seed, Stream::signal);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector x = Vector::Zero(n);
  if (config.x0.kind == SignalKind::random_on_shell) {
    for (int i = 0; i < n; ++i) x[i] = gauss(engine);
  } else {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    // Partial Fisher-Yates: only the first d positions are drawn.
    for (int k = 0; k < config.x0.sparsity; ++k) {
      std::uniform_int_distribution<int> pick(k, n - 1);
      std::swap(idx[k], idx[pick(engine)]);
      x[idx[k]] = gauss(engine);
    }
  }
  const double norm = x.norm();
  if (norm > 0.0) x *= R0 / norm;
  if (!contains(config.set, x, 1e-9))
    fail(ErrorCode::invalid_argument,
         "experiment: a signal of norm " + std::to_string(R0) + " does not fit in " +
             config.set.describe());
  return x;
}

int default_thread_count() {
  if (const char* env = std::getenv("PHASELAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<CellSummary> summarize(const std::vector<ResultRow>& rows,
                                   double success_tolerance) {
  using Key = std::tuple<int, double, double>;
  std::map<Key, std::size_t> index;
  std::vector<CellSummary> cells;
  std::vector<std::vector<double>> prod, sign;
  std::vector<int> successes;
  for (const auto& row : rows) {
    const Key key{row.N, row.sigma, row.R0};
    auto [it, fresh] = index.try_emplace(key, cells.size());
    if (fresh) {
      cells.push_back(CellSummary{row.N, row.sigma, row.R0});
      prod.emplace_back();
      sign.emplace_back();
      successes.push_back(0);
    }
    const std::size_t c = it->second;
    ++cells[c].trials;
    if (row.sign_error <= success_tolerance) ++successes[c];
    if (!row.converged) {
      ++cells[c].non_converged;
      continue;
    }
    prod[c].push_back(row.product_error);
    sign[c].push_back(row.sign_error);
  }
  auto median = [](std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
  };
  for (std::size_t c = 0; c < cells.size(); ++c) {
    cells[c].median_product_error = median(prod[c]);
    cells[c].median_sign_error = median(sign[c]);
    cells[c].success_fraction = double(successes[c]) / cells[c].trials;
  }
  return cells;
}

ResultsTable run_experiment(const ExperimentConfig& config, int threads) {
  validate(config);
  struct Cell {
    int N;
    double sigma;
    double R0;
  };
  std::vector<Cell> cells;
  const std::vector<double> R0s =
      config.R0_grid.empty()
          ? std::vector<double>{config.x0.kind == SignalKind::explicit_vector
                                    ? config.x0.values.norm()
                                    : config.x0.R0}
          : config.R0_grid;
  for (double R0 : R0s)
    for (int N : config.N_grid)
      for (double sigma : config.sigma_grid) cells.push_back({N, sigma, R0});

  const std::size_t T = static_cast<std::size_t>(config.trials_per_cell);
  const std::size_t tasks = cells.size() * T;
  ResultsTable table;
  table.rows.resize(tasks);
  const Ensemble ensemble{config.ensemble, config.set.dimension()};

  // Trial t uses the same streams in every cell, so cells differ only in the
  // swept parameter (common random numbers).
  auto work = [&](std::size_t task) {
    const Cell& cell = cells[task / T];
    const int t = static_cast<int>(task % T);
    ResultRow& row = table.rows[task];
    row.N = cell.N;
    row.sigma = cell.sigma;
    row.R0 = cell.R0;
    row.trial = t;
    const std::uint64_t seed = derive_seed(config.master_seed, Stream::trial, t);
    try {
      const Vector x0 = draw_signal(config, cell.R0, seed);
      const NoiseModel noise{cell.sigma > 0.0 ? config.noise : NoiseKind::none, cell.sigma};
      const PhaseSample sample = generate_sample(x0, ensemble, noise, cell.N, seed);
      const std::uint64_t solver_seed = derive_seed(seed, Stream::solver);
      const TrialResult r = config.solver == SolverKind::oracle
                                ? solve_oracle(sample, config.set, config.solver_config, solver_seed)
                                : solve_pgd(sample, config.set, config.solver_config, solver_seed);
      row.product_error = r.product_error;
      row.sign_error = r.sign_error;
      row.objective = r.objective_value;
      row.converged = r.converged;
    } catch (const Error&) {
      // Recorded, not fatal: the row carries NaN metrics.
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.product_error = row.sign_error = row.objective = nan;
      row.converged = false;
    }
  };

  const int workers = static_cast<int>(
      std::min<std::size_t>(threads > 0 ? threads : default_thread_count(), std::max<std::size_t>(tasks, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks; i = next++) work(i);
      });
  }
  table.summaries = summarize(table.rows, config.success_tolerance);
  return table;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), "fit_slope: x and y lengths differ");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  std::vector<double> distinct = lx;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3)
    fail(ErrorCode::insufficient_data,
         "fit_slope: need at least 3 distinct positive x values with positive medians, have " +
             std::to_string(distinct.size()));
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  fit.points = static_cast<int>(lx.size());
  return fit;
}

SlopeFit fit_slope(const ResultsTable& table, SlopeAxis axis, SlopeMetric metric) {
  std::vector<double> x, y;
  for (const auto& s : table.summaries) {
    x.push_back(axis == SlopeAxis::N ? double(s.N) : s.sigma);
    y.push_back(metric == SlopeMetric::median_product_error ? s.median_product_error
                                                             : s.median_sign_error);
  }
  return fit_loglog(x, y);
}

}  // namespace phaselab
