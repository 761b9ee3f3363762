#pragma once

#include <span>
#include <vector>

#include "phaselab/types.hpp"

namespace phaselab {

// Coordinates of |v| sorted nonincreasingly.
struct RearrangedVector {
  Vector values;
  Vector sorted_abs;
};

RearrangedVector rearrange(const Vector& v);

// Orlicz ψ_α norm of v under the uniform probability measure on its coordinates.
double psi_alpha_norm(const Vector& v, double alpha);

// sup_i v*_i / log^{1/α}(e m / i)
double rearrangement_functional(const Vector& v, double alpha);

struct PaleyZygmund {
  double fraction = 0.0;
  double beta_ratio = 0.0;
};

// beta_ratio = ||v||_ψ1 / ||v||_L1; fraction of coordinates with |v_i| >= eta ||v||_L1.
PaleyZygmund paley_zygmund_fraction(const Vector& v, double eta);

// Fraction of rows with |<a_i,u><a_i,v>| >= c1 ||u|| ||v||.
double empirical_smallball_fraction(const Matrix& A, const Vector& u, const Vector& v,
                                    double c1);

// max over (t, s) of |(1/N) Σ <a_i,t><a_i,s> - <t,s>|.
double product_process_sup(const Matrix& A, std::span<const Vector> T1,
                           std::span<const Vector> T2);

struct NormEquivalence {
  bool forward_holds = true;
  bool backward_holds = true;
  bool small_norm_case = false;
};

// Large norm (||x0|| >= sqrt(R)/4):
//   ||x0|| min ||x -+ x0|| >= R  =>  ||x-x0|| ||x+x0|| >= c1 R    (forward)
//   ||x-x0|| ||x+x0|| >= R       =>  ||x0|| min ||x -+ x0|| >= c2 R (backward)
// Small norm: ||x|| >= c_upper sqrt(R) => product >= R (forward) and
// product >= R => ||x|| >= c_lower sqrt(R) (backward).
NormEquivalence norm_equivalence_check(const Vector& x, const Vector& x0, double R,
                                       double c1, double c2, double c_lower,
                                       double c_upper);

}  // namespace phaselab
