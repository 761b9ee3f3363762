#include "phaselab/phaselab.h"

#include <sstream>
#include <string>

#include <json.hpp>

#include "phaselab/error.hpp"
#include "phaselab/experiment.hpp"
#include "phaselab/lemma_checks.hpp"
#include "phaselab/predict.hpp"
#include "phaselab/results_io.hpp"
#include "phaselab/sets.hpp"

using namespace phaselab;

struct pl_set {
  ConstraintSet set;
  std::string text;
};

struct pl_config {
  ExperimentConfig config;
  std::string json;
};

struct pl_results {
  ResultsTable table;
  std::string csv;
  std::string summary_json;
};

struct pl_report {
  bool passed = false;
  std::string json;
};

namespace {

thread_local std::string last_error;

pl_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return PL_INVALID_ARGUMENT;
    case ErrorCode::unsupported_set: return PL_UNSUPPORTED_SET;
    case ErrorCode::budget_exceeded: return PL_BUDGET_EXCEEDED;
    case ErrorCode::parse_error: return PL_PARSE_ERROR;
    case ErrorCode::insufficient_data: return PL_INSUFFICIENT_DATA;
    case ErrorCode::io_error: return PL_IO_ERROR;
  }
  return PL_INTERNAL_ERROR;
}

template <class F>
pl_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return PL_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return PL_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown failure";
    return PL_INTERNAL_ERROR;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) fail(ErrorCode::invalid_argument, std::string(what) + " is null");
}

Vector view(const double* x, int n, const char* what) {
  need(x, what);
  require(n >= 0, "negative length");
  return Eigen::Map<const Vector>(x, n);
}

void check_dim(const pl_set* s, int n) {
  need(s, "set");
  if (n != s->set.dimension())
    fail(ErrorCode::invalid_argument, "vector length " + std::to_string(n) +
                                          " does not match set dimension " +
                                          std::to_string(s->set.dimension()));
}

void fill(const RatePrediction& p, pl_prediction* out) {
  static const std::string names[] = {"noise_free_r0", "high_noise_r2", "large_signal_sN",
                                      "small_signal_vN", "low_snr_rN"};
  out->rate = p.rate;
  out->product_rate = p.product_rate;
  out->regime = names[static_cast<int>(p.regime)].c_str();
}

}  // namespace

extern "C" {

const char* pl_last_error(void) { return last_error.c_str(); }

const char* pl_status_name(pl_status status) {
  switch (status) {
    case PL_OK: return "ok";
    case PL_INVALID_ARGUMENT: return "invalid_argument";
    case PL_UNSUPPORTED_SET: return "unsupported_set";
    case PL_BUDGET_EXCEEDED: return "budget_exceeded";
    case PL_PARSE_ERROR: return "parse_error";
    case PL_INSUFFICIENT_DATA: return "insufficient_data";
    case PL_IO_ERROR: return "io_error";
    case PL_INTERNAL_ERROR: return "internal_error";
  }
  return "unknown";
}

int pl_default_threads(void) { return default_thread_count(); }

pl_status pl_set_parse(const char* spec, pl_set** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    ConstraintSet set = parse_set(spec);
    *out = new pl_set{set, set.describe()};
  });
}

void pl_set_free(pl_set* set) { delete set; }

int pl_set_dimension(const pl_set* set) { return set ? set->set.dimension() : 0; }

const char* pl_set_describe(const pl_set* set) { return set ? set->text.c_str() : ""; }

pl_status pl_set_project(const pl_set* set, const double* x, int n, double* out) {
  return guarded([&] {
    check_dim(set, n);
    need(out, "out");
    const Vector p = project(set->set, view(x, n, "x"));
    Eigen::Map<Vector>(out, n) = p;
  });
}

pl_status pl_set_contains(const pl_set* set, const double* x, int n, double tol, int* out) {
  return guarded([&] {
    check_dim(set, n);
    need(out, "out");
    *out = contains(set->set, view(x, n, "x"), tol) ? 1 : 0;
  });
}

pl_status pl_support_function(const pl_set* set, double r, const double* g, int n,
                              double* out) {
  return guarded([&] {
    check_dim(set, n);
    need(out, "out");
    *out = support_function_cap(set->set, r, view(g, n, "g"));
  });
}

pl_status pl_mean_width_mc(const pl_set* set, double r, int draws, uint64_t seed,
                           double* value, double* std_error) {
  return guarded([&] {
    need(set, "set");
    const WidthEstimate w = mean_width_mc(set->set, r, draws, seed);
    if (value) *value = w.value;
    if (std_error) *std_error = w.std_error;
  });
}

pl_status pl_mean_width_closed_form(const pl_set* set, double r, double* out) {
  return guarded([&] {
    need(set, "set");
    need(out, "out");
    *out = mean_width_closed_form(set->set, r);
  });
}

pl_status pl_fixed_point(const pl_set* set, const char* functional, double level, int N,
                         double shell_R0, const char* backend, int draws, uint64_t seed,
                         pl_fixed_point_result* out) {
  return guarded([&] {
    need(set, "set");
    need(functional, "functional");
    need(out, "out");
    FixedPointQuery q;
    q.functional = parse_functional(functional);
    q.level = level;
    q.N = N;
    q.shell_R0 = shell_R0;
    q.backend = backend ? parse_backend(backend) : Backend::monte_carlo;
    McConfig mc;
    if (draws > 0) mc.gaussian_draws = draws;
    mc.seed = seed;
    const FixedPointResult r = fixed_point(set->set, q, mc);
    out->value = r.value;
    out->bracket_width = r.bracket_width;
    out->power = r.power;
    out->warnings = static_cast<int>(r.warnings.size());
  });
}

pl_status pl_packing_count(const pl_set* set, const double* center, int n, double ball_radius,
                           double separation, double shell_R0, int candidates, int grid,
                           uint64_t seed, int* count) {
  return guarded([&] {
    check_dim(set, n);
    need(count, "count");
    PackingQuery q;
    q.center = view(center, n, "center");
    q.ball_radius = ball_radius;
    q.separation = separation;
    if (shell_R0 >= 0.0) q.shell_R0 = shell_R0;
    q.candidates = candidates;
    q.mode = grid ? CandidateMode::grid : CandidateMode::random;
    q.seed = seed;
    *count = packing_count(set->set, q).count;
  });
}

pl_status pl_minimax_lower_rate(const pl_set* set, int N, double sigma, double R0,
                                int candidates, uint64_t seed, double* rate, double* qN,
                                double* tN, int* large_norm) {
  return guarded([&] {
    need(set, "set");
    McConfig mc;
    mc.seed = seed;
    if (candidates > 0) mc.packing_candidates = candidates;
    const MinimaxLowerRate m = minimax_lower_rate(set->set, N, sigma, R0, mc);
    if (rate) *rate = m.rate;
    if (qN) *qN = m.qN;
    if (tN) *tN = m.tN;
    if (large_norm) *large_norm = m.large_norm ? 1 : 0;
  });
}

pl_status pl_predict_sparse(int n, int d, int N, double sigma, double R0, pl_prediction* out) {
  return guarded([&] {
    need(out, "out");
    fill(predict_rate_sparse(n, d, N, sigma, R0), out);
  });
}

pl_status pl_predict_l1(int n, int N, double sigma, double R0, pl_prediction* out) {
  return guarded([&] {
    need(out, "out");
    fill(predict_rate_l1(n, N, sigma, R0), out);
  });
}

pl_status pl_config_load(const char* path, pl_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new pl_config{load_config(path), {}};
  });
}

pl_status pl_config_from_json(const char* text, pl_config** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new pl_config{config_from_json(text), {}};
  });
}

void pl_config_free(pl_config* config) { delete config; }

const char* pl_config_to_json(pl_config* config) {
  if (!config) return "";
  config->json = config_to_json(config->config);
  return config->json.c_str();
}

pl_status pl_config_set_seed(pl_config* config, uint64_t seed) {
  return guarded([&] {
    need(config, "config");
    config->config.master_seed = seed;
  });
}

pl_status pl_simulate(const pl_config* config, int threads, pl_results** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    *out = new pl_results{run_experiment(config->config, threads), {}, {}};
  });
}

pl_status pl_results_load_csv(const char* path, double success_tolerance, pl_results** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    require(success_tolerance >= 0.0, "success_tolerance must be >= 0");
    auto* r = new pl_results{};
    r->table.rows = load_results(path);
    r->table.summaries = summarize(r->table.rows, success_tolerance);
    *out = r;
  });
}

void pl_results_free(pl_results* results) { delete results; }

size_t pl_results_row_count(const pl_results* results) {
  return results ? results->table.rows.size() : 0;
}

pl_status pl_results_row(const pl_results* results, size_t index, pl_row* out) {
  return guarded([&] {
    need(results, "results");
    need(out, "out");
    require(index < results->table.rows.size(), "row index out of range");
    const ResultRow& r = results->table.rows[index];
    *out = pl_row{r.N, r.sigma, r.R0, r.trial, r.product_error, r.sign_error, r.objective,
                  r.converged ? 1 : 0};
  });
}

size_t pl_results_summary_count(const pl_results* results) {
  return results ? results->table.summaries.size() : 0;
}

pl_status pl_results_summary(const pl_results* results, size_t index, pl_summary* out) {
  return guarded([&] {
    need(results, "results");
    need(out, "out");
    require(index < results->table.summaries.size(), "summary index out of range");
    const CellSummary& s = results->table.summaries[index];
    *out = pl_summary{s.N, s.sigma, s.R0, s.trials, s.non_converged, s.median_product_error,
                      s.median_sign_error, s.success_fraction};
  });
}

pl_status pl_results_export_csv(const pl_results* results, const char* path) {
  return guarded([&] {
    need(results, "results");
    need(path, "path");
    export_results(results->table, path);
  });
}

const char* pl_results_csv(pl_results* results) {
  if (!results) return "";
  std::ostringstream os;
  write_results_csv(results->table.rows, os);
  results->csv = os.str();
  return results->csv.c_str();
}

const char* pl_results_summary_json(pl_results* results) {
  if (!results) return "";
  results->summary_json = summaries_to_json(results->table.summaries);
  return results->summary_json.c_str();
}

pl_status pl_fit_slope(const pl_results* results, const char* axis, const char* metric,
                       double* slope, double* r_squared) {
  return guarded([&] {
    need(results, "results");
    need(axis, "axis");
    need(metric, "metric");
    const std::string a = axis, m = metric;
    require(a == "N" || a == "sigma", "axis must be N or sigma");
    require(m == "product_error" || m == "sign_error",
            "metric must be product_error or sign_error");
    const SlopeFit f = fit_slope(results->table, a == "N" ? SlopeAxis::N : SlopeAxis::sigma,
                                 m == "product_error" ? SlopeMetric::median_product_error
                                                      : SlopeMetric::median_sign_error);
    if (slope) *slope = f.slope;
    if (r_squared) *r_squared = f.r_squared;
  });
}

pl_status pl_check_run(const char* suite, long long norm_triples, int vectors, uint64_t seed,
                       pl_report** out) {
  return guarded([&] {
    need(suite, "suite");
    need(out, "out");
    CheckOptions opt;
    if (norm_triples > 0) opt.norm_triples = norm_triples;
    if (vectors > 0) opt.vectors = vectors;
    opt.seed = seed;
    const auto outcomes = run_check_suite(suite, opt);
    nlohmann::json j = nlohmann::json::array();
    bool passed = true;
    for (const auto& o : outcomes) {
      j.push_back({{"name", o.name}, {"passed", o.passed}, {"detail", o.detail}});
      passed = passed && o.passed;
    }
    *out = new pl_report{passed, nlohmann::json{{"suite", suite}, {"passed", passed}, {"checks", j}}.dump(2) + "\n"};
  });
}

void pl_report_free(pl_report* report) { delete report; }

int pl_report_passed(const pl_report* report) { return report && report->passed ? 1 : 0; }

const char* pl_report_json(const pl_report* report) { return report ? report->json.c_str() : ""; }

}  // extern "C"
