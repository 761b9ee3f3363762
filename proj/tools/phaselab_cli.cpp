// Command-line front end. Talks to the library only through the C API.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phaselab/phaselab.h"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitCheckFailed = 3;

struct Failure {
  pl_status status;
  std::string message;
};

void ok(pl_status s) {
  if (s != PL_OK) throw Failure{s, pl_last_error()};
}

struct Globals {
  uint64_t seed = 1;
  int threads = 0;
  std::string out;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Failure{PL_IO_ERROR, "cannot open '" + g.out + "' for writing"};
  f << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(v > 0 ? "inf" : "nan");
}

struct SetHandle {
  pl_set* p = nullptr;
  explicit SetHandle(const std::string& spec) { ok(pl_set_parse(spec.c_str(), &p)); }
  ~SetHandle() { pl_set_free(p); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-retrieval ERM laboratory"};
  app.require_subcommand(1);
  Globals g;
  g.threads = pl_default_threads();
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (default: PHASELAB_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Write output here instead of stdout (simulate: the row CSV)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a rate-scaling sweep from a JSON config");
  std::string config_path;
  sim->add_option("config", config_path, "Experiment config (JSON)")->required();
  bool keep_seed = false;
  sim->add_flag("--config-seed", keep_seed, "Use the config's master_seed instead of --seed");

  // width
  auto* width = app.add_subcommand("width", "Gaussian mean width of set ∩ rB2");
  std::string width_set;
  double width_r = 1.0;
  int width_draws = 2000;
  width->add_option("--set", width_set, "Set, e.g. l1_ball:n=100,radius=1")->required();
  width->add_option("--r", width_r, "Cap radius")->required();
  width->add_option("--draws", width_draws, "Gaussian draws")->capture_default_str();

  // fixed-point
  auto* fp = app.add_subcommand("fixed-point", "Fixed point of a complexity functional");
  std::string fp_set, fp_functional, fp_backend = "monte_carlo";
  double fp_level = 1.0, fp_shell = 0.0;
  int fp_N = 0, fp_draws = 2000;
  fp->add_option("--set", fp_set, "Constraint set")->required();
  fp->add_option("--functional", fp_functional, "r0 r2 rN sN vN qN tN")->required();
  fp->add_option("--level", fp_level, "Scale constant")->required();
  fp->add_option("--N", fp_N, "Sample size")->required();
  fp->add_option("--shell-R0", fp_shell, "Shell radius (qN, tN) or signal norm (r0, r2)");
  fp->add_option("--backend", fp_backend, "closed_form or monte_carlo")->capture_default_str();
  fp->add_option("--draws", fp_draws, "Gaussian draws")->capture_default_str();

  // packing
  auto* pk = app.add_subcommand("packing", "Greedy packing count, or the packing lower rate");
  std::string pk_set;
  std::vector<double> pk_center;
  double pk_ball = 1.0, pk_sep = 0.5, pk_shell = -1.0;
  int pk_candidates = 2000;
  bool pk_grid = false;
  int lr_N = 0;
  double lr_sigma = 0.0, lr_R0 = 0.0;
  pk->add_option("--set", pk_set, "Constraint set")->required();
  pk->add_option("--center", pk_center, "Ball centre (default: origin)")->delimiter(',');
  pk->add_option("--ball-radius", pk_ball, "Ball radius")->capture_default_str();
  pk->add_option("--separation", pk_sep, "Separation")->capture_default_str();
  pk->add_option("--shell-R0", pk_shell, "Restrict to ||x|| = R0 (±1%)");
  pk->add_option("--candidates", pk_candidates, "Candidate proposals")->capture_default_str();
  pk->add_flag("--grid", pk_grid, "Regular grid candidates (n <= 2)");
  auto* lr = pk->add_option("--lower-rate-N", lr_N, "Report the packing lower rate at this N");
  pk->add_option("--sigma", lr_sigma, "Noise level for the lower rate")->needs(lr);
  pk->add_option("--R0", lr_R0, "Signal norm for the lower rate")->needs(lr);

  // check
  auto* chk = app.add_subcommand("check", "Deterministic lemma regression suites");
  std::string suite;
  long long triples = 1'000'000;
  int vectors = 1000;
  chk->add_option("suite", suite, "norm-equivalence, rearrangement, paley-zygmund or all")
      ->required();
  chk->add_option("--triples", triples, "Random triples for norm-equivalence")
      ->capture_default_str();
  chk->add_option("--vectors", vectors, "Random vectors per regression")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*sim) {
      pl_config* cfg = nullptr;
      ok(pl_config_load(config_path.c_str(), &cfg));
      std::unique_ptr<pl_config, void (*)(pl_config*)> hold(cfg, pl_config_free);
      if (!keep_seed) ok(pl_config_set_seed(cfg, g.seed));
      pl_results* res = nullptr;
      ok(pl_simulate(cfg, g.threads, &res));
      std::unique_ptr<pl_results, void (*)(pl_results*)> hold_r(res, pl_results_free);
      if (!g.out.empty()) ok(pl_results_export_csv(res, g.out.c_str()));
      std::cout << pl_results_summary_json(res);
      if (g.out.empty()) std::cerr << "note: rows not saved; pass --out FILE to write the CSV\n";
    } else if (*width) {
      SetHandle set(width_set);
      double value = 0, se = 0, closed = 0;
      ok(pl_mean_width_mc(set.p, width_r, width_draws, g.seed, &value, &se));
      nlohmann::json j{{"set", pl_set_describe(set.p)}, {"r", width_r}, {"value", value},
                       {"std_error", se}, {"samples", width_draws}};
      if (pl_mean_width_closed_form(set.p, width_r, &closed) == PL_OK) j["closed_form"] = closed;
      emit(g, dump(j));
    } else if (*fp) {
      SetHandle set(fp_set);
      pl_fixed_point_result r{};
      ok(pl_fixed_point(set.p, fp_functional.c_str(), fp_level, fp_N, fp_shell,
                        fp_backend.c_str(), fp_draws, g.seed, &r));
      emit(g, dump({{"set", pl_set_describe(set.p)},
                    {"functional", fp_functional},
                    {"level", fp_level},
                    {"N", fp_N},
                    {"backend", fp_backend},
                    {"value", number(r.value)},
                    {"bracket_width", number(r.bracket_width)},
                    {"power", r.power},
                    {"warnings", r.warnings}}));
    } else if (*pk) {
      SetHandle set(pk_set);
      const int n = pl_set_dimension(set.p);
      if (pk_center.empty()) pk_center.assign(n, 0.0);
      nlohmann::json j{{"set", pl_set_describe(set.p)}};
      if (lr_N > 0) {
        double rate = 0, q = 0, t = 0;
        int large = 0;
        ok(pl_minimax_lower_rate(set.p, lr_N, lr_sigma, lr_R0, pk_candidates, g.seed, &rate,
                                 &q, &t, &large));
        j.update({{"N", lr_N}, {"sigma", lr_sigma}, {"R0", lr_R0}, {"lower_rate", number(rate)},
                  {"qN", number(q)}, {"tN", number(t)}, {"large_norm", large != 0}});
      } else {
        int count = 0;
        ok(pl_packing_count(set.p, pk_center.data(), static_cast<int>(pk_center.size()), pk_ball,
                            pk_sep, pk_shell, pk_candidates, pk_grid ? 1 : 0, g.seed, &count));
        j.update({{"ball_radius", pk_ball}, {"separation", pk_sep}, {"count", count}});
      }
      emit(g, dump(j));
    } else if (*chk) {
      pl_report* rep = nullptr;
      ok(pl_check_run(suite.c_str(), triples, vectors, g.seed, &rep));
      std::unique_ptr<pl_report, void (*)(pl_report*)> hold(rep, pl_report_free);
      emit(g, pl_report_json(rep));
      if (!pl_report_passed(rep)) return kExitCheckFailed;
    }
  } catch (const Failure& f) {
    std::cerr << "error (" << pl_status_name(f.status) << "): " << f.message << "\n";
    return f.status == PL_INTERNAL_ERROR ? 1 : kExitValidation;
  }
  return 0;
}
