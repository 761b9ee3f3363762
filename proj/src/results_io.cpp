#include "phaselab/results_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "phaselab/error.hpp"

namespace phaselab {

using nlohmann::json;

namespace {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void csv_error(int line, const std::string& field, const std::string& why) {
  fail(ErrorCode::parse_error,
       "results csv line " + std::to_string(line) + ", field '" + field + "': " + why);
}

double parse_double(const std::string& s, int line, const std::string& field) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    csv_error(line, field, "not a number: '" + s + "'");
  return v;
}

int parse_int(const std::string& s, int line, const std::string& field) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    csv_error(line, field, "not an integer: '" + s + "'");
  return v;
}

json solver_json(SolverKind kind, const SolverConfig& c) {
  json j;
  j["kind"] = kind == SolverKind::pgd ? "pgd" : "oracle";
  j["max_iterations"] = c.max_iterations;
  j["gradient_tolerance"] = c.gradient_tolerance;
  if (const auto* f = std::get_if<FixedStep>(&c.step_rule)) {
    j["step_rule"] = {{"kind", "fixed"}, {"step", f->step}};
  } else {
    const auto& b = std::get<Backtracking>(c.step_rule);
    j["step_rule"] = {{"kind", "backtracking"},
                      {"shrink", b.shrink},
                      {"growth", b.growth},
                      {"initial_step", b.initial_step}};
  }
  j["restarts"] = c.restarts;
  j["oracle_budget"] = c.oracle_budget;
  return j;
}

// Field access with the dotted path in every message.
template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  const std::string path = where.empty() ? key : where + "." + key;
  if (!j.contains(key)) fail(ErrorCode::parse_error, "config: missing required field '" + path + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::parse_error, "config: field '" + path + "' has the wrong type");
  }
}

template <class T>
T get_or(const json& j, const std::string& key, const std::string& where, T fallback) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

void wrap(const std::string& field, auto&& body) {
  try {
    body();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse_error) throw;
    fail(ErrorCode::parse_error, "config: field '" + field + "': " + e.what());
  }
}

}  // namespace

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows)
    out << r.N << ',' << number(r.sigma) << ',' << number(r.R0) << ',' << r.trial << ','
        << number(r.product_error) << ',' << number(r.sign_error) << ','
        << number(r.objective) << ',' << (r.converged ? 1 : 0) << '\n';
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  static const char* names[] = {"N", "sigma", "R0", "trial", "product_error",
                                "sign_error", "objective", "converged"};
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::parse_error, "results csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    fail(ErrorCode::parse_error, "results csv line 1: unexpected header '" + line + "'");
  std::vector<ResultRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 8)
      fail(ErrorCode::parse_error, "results csv line " + std::to_string(lineno) + ": expected 8 fields, got " +
                                       std::to_string(f.size()));
    ResultRow r;
    r.N = parse_int(f[0], lineno, names[0]);
    r.sigma = parse_double(f[1], lineno, names[1]);
    r.R0 = parse_double(f[2], lineno, names[2]);
    r.trial = parse_int(f[3], lineno, names[3]);
    r.product_error = parse_double(f[4], lineno, names[4]);
    r.sign_error = parse_double(f[5], lineno, names[5]);
    r.objective = parse_double(f[6], lineno, names[6]);
    if (f[7] != "0" && f[7] != "1") csv_error(lineno, names[7], "expected 0 or 1, got '" + f[7] + "'");
    r.converged = f[7] == "1";
    rows.push_back(r);
  }
  return rows;
}

void export_results(const ResultsTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  write_results_csv(table.rows, out);
  if (!out) fail(ErrorCode::io_error, "failed writing '" + path + "'");
}

std::vector<ResultRow> load_results(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open '" + path + "'");
  return read_results_csv(in);
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["set"] = c.set.describe();
  j["ensemble"] = to_string(c.ensemble);
  j["noise"] = to_string(c.noise);
  json x0;
  switch (c.x0.kind) {
    case SignalKind::explicit_vector:
      x0["kind"] = "explicit";
      x0["values"] = std::vector<double>(c.x0.values.data(), c.x0.values.data() + c.x0.values.size());
      break;
    case SignalKind::random_on_shell:
      x0["kind"] = "random_on_shell";
      x0["R0"] = c.x0.R0;
      break;
    case SignalKind::random_sparse:
      x0["kind"] = "random_sparse";
      x0["d"] = c.x0.sparsity;
      x0["R0"] = c.x0.R0;
      break;
  }
  j["x0"] = x0;
  j["N_grid"] = c.N_grid;
  j["sigma_grid"] = c.sigma_grid;
  if (!c.R0_grid.empty()) j["R0_grid"] = c.R0_grid;
  j["trials_per_cell"] = c.trials_per_cell;
  j["solver"] = solver_json(c.solver, c.solver_config);
  j["master_seed"] = c.master_seed;
  j["success_tolerance"] = c.success_tolerance;
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::parse_error, std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::parse_error, "config: top level must be an object");
  ExperimentConfig c;
  wrap("set", [&] { c.set = parse_set(get<std::string>(j, "set", "")); });
  wrap("ensemble", [&] {
    c.ensemble = parse_ensemble_kind(get_or<std::string>(j, "ensemble", "", "standard_gaussian"));
  });
  wrap("noise", [&] { c.noise = parse_noise_kind(get_or<std::string>(j, "noise", "", "gaussian")); });

  const json x0 = get<json>(j, "x0", "");
  const std::string kind = get<std::string>(x0, "kind", "x0");
  if (kind == "explicit") {
    const auto values = get<std::vector<double>>(x0, "values", "x0");
    c.x0.kind = SignalKind::explicit_vector;
    c.x0.values = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  } else if (kind == "random_on_shell") {
    c.x0.kind = SignalKind::random_on_shell;
    c.x0.R0 = get<double>(x0, "R0", "x0");
  } else if (kind == "random_sparse") {
    c.x0.kind = SignalKind::random_sparse;
    c.x0.sparsity = get<int>(x0, "d", "x0");
    c.x0.R0 = get<double>(x0, "R0", "x0");
  } else {
    fail(ErrorCode::parse_error, "config: field 'x0.kind' has unknown value '" + kind + "'");
  }

  c.N_grid = get<std::vector<int>>(j, "N_grid", "");
  c.sigma_grid = get<std::vector<double>>(j, "sigma_grid", "");
  c.R0_grid = get_or<std::vector<double>>(j, "R0_grid", "", {});
  c.trials_per_cell = get<int>(j, "trials_per_cell", "");
  c.master_seed = get_or<std::uint64_t>(j, "master_seed", "", 1);
  c.success_tolerance = get_or<double>(j, "success_tolerance", "", 1e-6);

  if (j.contains("solver")) {
    const json s = get<json>(j, "solver", "");
    const std::string skind = get_or<std::string>(s, "kind", "solver", "pgd");
    if (skind == "pgd") c.solver = SolverKind::pgd;
    else if (skind == "oracle") c.solver = SolverKind::oracle;
    else fail(ErrorCode::parse_error, "config: field 'solver.kind' has unknown value '" + skind + "'");
    SolverConfig& sc = c.solver_config;
    sc.max_iterations = get_or<int>(s, "max_iterations", "solver", sc.max_iterations);
    sc.gradient_tolerance = get_or<double>(s, "gradient_tolerance", "solver", sc.gradient_tolerance);
    sc.restarts = get_or<int>(s, "restarts", "solver", sc.restarts);
    sc.oracle_budget = get_or<long long>(s, "oracle_budget", "solver", sc.oracle_budget);
    if (s.contains("step_rule")) {
      const json r = get<json>(s, "step_rule", "solver");
      const std::string rkind = get<std::string>(r, "kind", "solver.step_rule");
      if (rkind == "fixed") {
        sc.step_rule = FixedStep{get<double>(r, "step", "solver.step_rule")};
      } else if (rkind == "backtracking") {
        Backtracking b;
        b.shrink = get_or<double>(r, "shrink", "solver.step_rule", b.shrink);
        b.growth = get_or<double>(r, "growth", "solver.step_rule", b.growth);
        b.initial_step = get_or<double>(r, "initial_step", "solver.step_rule", b.initial_step);
        sc.step_rule = b;
      } else {
        fail(ErrorCode::parse_error,
             "config: field 'solver.step_rule.kind' has unknown value '" + rkind + "'");
      }
    }
  }
  try {
    validate(c);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_argument) fail(ErrorCode::parse_error, std::string("config: ") + e.what());
    throw;
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

void save_config(const ExperimentConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  out << config_to_json(config);
}

std::string summaries_to_json(const std::vector<CellSummary>& summaries) {
  json cells = json::array();
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  for (const auto& s : summaries)
    cells.push_back({{"N", s.N},
                     {"sigma", s.sigma},
                     {"R0", s.R0},
                     {"trials", s.trials},
                     {"non_converged", s.non_converged},
                     {"median_product_error", num(s.median_product_error)},
                     {"median_sign_error", num(s.median_sign_error)},
                     {"success_fraction", s.success_fraction}});
  return json{{"cells", cells}}.dump(2) + "\n";
}

}  // namespace phaselab
