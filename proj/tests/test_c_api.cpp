#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <thread>

#include "phaselab/phaselab.h"

namespace {

const char* kConfig = R"({
  "set": "sparse_cap:n=16,d=2",
  "x0": {"kind": "random_sparse", "d": 2, "R0": 1.0},
  "N_grid": [60, 120, 240],
  "sigma_grid": [0.1],
  "trials_per_cell": 4,
  "solver": {"kind": "pgd", "max_iterations": 2000, "restarts": 2},
  "master_seed": 11
})";

std::string temp_path(const char* name) {
  return (std::string(P_tmpdir) + "/") + name;
}

}  // namespace

TEST_CASE("sets through the C interface") {
  pl_set* set = nullptr;
  REQUIRE(pl_set_parse("l1_ball:n=3,radius=1", &set) == PL_OK);
  CHECK(pl_set_dimension(set) == 3);
  CHECK(std::string(pl_set_describe(set)).find("l1_ball") == 0);

  const double x[3] = {2.0, 0.0, 0.0};
  double p[3];
  REQUIRE(pl_set_project(set, x, 3, p) == PL_OK);
  CHECK(p[0] == doctest::Approx(1.0));
  int inside = 0;
  REQUIRE(pl_set_contains(set, p, 3, 1e-12, &inside) == PL_OK);
  CHECK(inside == 1);
  REQUIRE(pl_set_contains(set, x, 3, 1e-12, &inside) == PL_OK);
  CHECK(inside == 0);

  const double g[3] = {3.0, 4.0, 0.0};
  double h = 0.0;
  REQUIRE(pl_support_function(set, 10.0, g, 3, &h) == PL_OK);
  CHECK(h == doctest::Approx(4.0));

  CHECK(pl_set_project(set, x, 2, p) == PL_INVALID_ARGUMENT);
  CHECK(std::string(pl_last_error()).size() > 0);
  pl_set_free(set);

  pl_set* bad = nullptr;
  CHECK(pl_set_parse("torus:n=3", &bad) == PL_PARSE_ERROR);
  CHECK(bad == nullptr);
  CHECK(pl_set_parse(nullptr, &bad) == PL_INVALID_ARGUMENT);
  pl_set_free(nullptr);
}

TEST_CASE("widths and fixed points") {
  pl_set* set = nullptr;
  REQUIRE(pl_set_parse("sparse_cap:n=64,d=4", &set) == PL_OK);
  double value = 0.0, se = 0.0, closed = 0.0;
  REQUIRE(pl_mean_width_mc(set, 1.0, 2000, 5, &value, &se) == PL_OK);
  REQUIRE(pl_mean_width_closed_form(set, 1.0, &closed) == PL_OK);
  CHECK(value > 0.0);
  CHECK(se > 0.0);
  CHECK(closed == doctest::Approx(std::sqrt(4 * std::log(std::exp(1.0) * 16))));

  pl_fixed_point_result fp{};
  REQUIRE(pl_fixed_point(set, "rN", 1.0, 1000, 0.0, "closed_form", 0, 1, &fp) == PL_OK);
  CHECK(fp.value >= 0.0);
  CHECK(pl_fixed_point(set, "bogus", 1.0, 1000, 0.0, "closed_form", 0, 1, &fp) ==
        PL_PARSE_ERROR);
  pl_set_free(set);
}

TEST_CASE("packing through the C interface") {
  pl_set* set = nullptr;
  REQUIRE(pl_set_parse("l2_ball:n=2,radius=1", &set) == PL_OK);
  const double center[2] = {0.0, 0.0};
  int count = 0;
  REQUIRE(pl_packing_count(set, center, 2, 1.0, 1.0, -1.0, 100, 1, 1, &count) == PL_OK);
  CHECK(count >= 2);
  CHECK(pl_packing_count(set, center, 2, 1.0, 0.0, -1.0, 100, 1, 1, &count) ==
        PL_INVALID_ARGUMENT);
  pl_set_free(set);
}

TEST_CASE("predictions through the C interface") {
  pl_prediction p{};
  REQUIRE(pl_predict_sparse(64, 4, 200, 0.0, 1.0, &p) == PL_OK);
  CHECK(p.rate == 0.0);
  CHECK(std::string(p.regime) == "noise_free_r0");
  REQUIRE(pl_predict_l1(10, 10000, 0.1, 0.05, &p) == PL_OK);
  CHECK(std::string(p.regime) == "small_signal_vN");
  CHECK(pl_predict_sparse(4, 5, 100, 1.0, 1.0, &p) == PL_INVALID_ARGUMENT);
}

TEST_CASE("simulate, export and reload") {
  pl_config* config = nullptr;
  REQUIRE(pl_config_from_json(kConfig, &config) == PL_OK);
  REQUIRE(pl_config_set_seed(config, 99) == PL_OK);
  CHECK(std::string(pl_config_to_json(config)).find("99") != std::string::npos);

  pl_results* a = nullptr;
  pl_results* b = nullptr;
  REQUIRE(pl_simulate(config, 1, &a) == PL_OK);
  REQUIRE(pl_simulate(config, 4, &b) == PL_OK);
  REQUIRE(pl_results_row_count(a) == 12);
  CHECK(std::string(pl_results_csv(a)) == pl_results_csv(b));
  CHECK(pl_results_summary_count(a) == 3);

  pl_row row{};
  REQUIRE(pl_results_row(a, 5, &row) == PL_OK);
  CHECK(row.N == 120);
  CHECK(row.trial == 1);
  CHECK(pl_results_row(a, 12, &row) == PL_INVALID_ARGUMENT);
  pl_summary s{};
  REQUIRE(pl_results_summary(a, 0, &s) == PL_OK);
  CHECK(s.trials == 4);

  double slope = 0.0, r2 = 0.0;
  REQUIRE(pl_fit_slope(a, "N", "product_error", &slope, &r2) == PL_OK);
  CHECK(std::isfinite(slope));
  CHECK(pl_fit_slope(a, "sigma", "product_error", &slope, &r2) == PL_INSUFFICIENT_DATA);
  CHECK(pl_fit_slope(a, "time", "product_error", &slope, &r2) == PL_INVALID_ARGUMENT);

  const std::string path = temp_path("phaselab_c_api_rows.csv");
  REQUIRE(pl_results_export_csv(a, path.c_str()) == PL_OK);
  pl_results* c = nullptr;
  REQUIRE(pl_results_load_csv(path.c_str(), 1e-6, &c) == PL_OK);
  CHECK(std::string(pl_results_csv(c)) == pl_results_csv(a));
  CHECK(std::string(pl_results_summary_json(c)) == pl_results_summary_json(a));
  std::remove(path.c_str());

  CHECK(pl_results_load_csv("/nonexistent/rows.csv", 1e-6, &c) == PL_IO_ERROR);
  pl_results_free(a);
  pl_results_free(b);
  pl_results_free(c);
  pl_config_free(config);
}

TEST_CASE("config errors") {
  pl_config* config = nullptr;
  CHECK(pl_config_from_json("{\"set\": \"ambient:n=2\"}", &config) == PL_PARSE_ERROR);
  CHECK(std::string(pl_last_error()).find("x0") != std::string::npos);
  CHECK(pl_config_load("/nonexistent/config.json", &config) == PL_IO_ERROR);
}

TEST_CASE("errors are per thread") {
  pl_set* set = nullptr;
  CHECK(pl_set_parse("nonsense", &set) == PL_PARSE_ERROR);
  const std::string mine = pl_last_error();
  std::string theirs = "unset";
  std::thread([&] { theirs = pl_last_error(); }).join();
  CHECK(theirs.empty());
  CHECK(mine == pl_last_error());
  CHECK(std::string(pl_status_name(PL_BUDGET_EXCEEDED)) == "budget_exceeded");
  CHECK(pl_default_threads() >= 1);
}

TEST_CASE("lemma checks through the C interface") {
  pl_report* report = nullptr;
  REQUIRE(pl_check_run("all", 20000, 100, 3, &report) == PL_OK);
  CHECK(pl_report_passed(report) == 1);
  CHECK(std::string(pl_report_json(report)).find("norm-equivalence") != std::string::npos);
  pl_report_free(report);
  CHECK(pl_check_run("unknown", 10, 10, 3, &report) == PL_INVALID_ARGUMENT);
}
