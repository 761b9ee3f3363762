#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phaselab/random.hpp"
#include "phaselab/types.hpp"

namespace phaselab {

// Constants for the deterministic lemmas. Their sharp values are not known;
// these are the values used as regression thresholds.
namespace frozen {

// Norm equivalence. c1 = 1 holds because max ||x -+ x0|| >= ||x0||. The other
// three are the sharp values (sqrt(17)-1)/16, sqrt(15)/4 and sqrt(17)/4,
// rounded towards safety; a random scan at n = 3 lands just inside them.
inline constexpr double norm_c1 = 1.0;
inline constexpr double norm_c2 = 0.1951;
inline constexpr double small_lower = 0.9682;
inline constexpr double small_upper = 1.0308;

// psi_alpha_norm / rearrangement_functional over the test vector family.
// A 30000-vector scan gave [1.1446, 2.8220] for alpha = 1 and [1.0699, 1.6578]
// for alpha = 2; the bounds below add roughly 10%.
struct RatioBounds {
  double alpha;
  double lo;
  double hi;
};
inline constexpr RatioBounds rearrangement[] = {
    {1.0, 1.03, 3.10},
    {2.0, 0.96, 1.82},
};

// Paley–Zygmund: vectors with beta_ratio <= beta keep at least `floor` of
// their coordinates above eta·||v||_L1. Scan minima were 0.400, 0.109, 0.040.
struct PzFloor {
  double beta;
  double eta;
  double floor;
};
inline constexpr PzFloor paley_zygmund[] = {
    {2.0, 0.25, 0.30},
    {4.0, 0.25, 0.08},
    {8.0, 0.25, 0.03},
};

}  // namespace frozen

// One draw from the vector family shared by calibration and regression: a
// mixture of gaussian, heavy-tailed, sparse and flat vectors of length m.
Vector sample_lemma_vector(Engine& engine, int m);

// One (x, x0) pair for R = 1 at n = 3, mixing generic and near-extremal layouts.
void sample_norm_triple(Engine& engine, Vector& x, Vector& x0);

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckOptions {
  long long norm_triples = 1'000'000;
  int vectors = 1000;
  std::uint64_t seed = 20240607;
};

// suite: norm-equivalence, rearrangement, paley-zygmund or all.
std::vector<CheckOutcome> run_check_suite(const std::string& suite, const CheckOptions& options);

std::vector<std::string> check_suite_names();

}  // namespace phaselab
