#include "phaselab/empirics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "phaselab/error.hpp"

namespace phaselab {

RearrangedVector rearrange(const Vector& v) {
  RearrangedVector out;
  out.values = v;
  out.sorted_abs = v.cwiseAbs();
  std::sort(out.sorted_abs.data(), out.sorted_abs.data() + out.sorted_abs.size(),
            std::greater<>());
  return out;
}

double psi_alpha_norm(const Vector& v, double alpha) {
  require(v.size() >= 1, "psi_alpha_norm: empty vector");
  require(alpha >= 1.0 && alpha <= 2.0, "psi_alpha_norm: alpha must lie in [1,2]");
  const double top = v.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0.0;
  const double m = static_cast<double>(v.size());
  // Work with |v|/top so exp never overflows inside the bracket.
  const Eigen::ArrayXd a = (v.cwiseAbs() / top).array().pow(alpha);
  auto excess = [&](double c) {  // E exp(|v|^α / c^α) - 2, c in units of top
    return (a / std::pow(c, alpha)).exp().mean() - 2.0;
  };
  double lo = 0.5 / std::pow(std::log(2.0 * m), 1.0 / alpha);
  double hi = 2.0 / std::pow(std::log(2.0), 1.0 / alpha);
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return top * 0.5 * (lo + hi);
}

double rearrangement_functional(const Vector& v, double alpha) {
  require(v.size() >= 1, "rearrangement_functional: empty vector");
  require(alpha > 0.0, "rearrangement_functional: alpha must be positive");
  const Vector s = rearrange(v).sorted_abs;
  const double m = static_cast<double>(v.size());
  double best = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double denom = std::pow(std::log(std::exp(1.0) * m / static_cast<double>(i + 1)),
                                  1.0 / alpha);
    best = std::max(best, s[i] / denom);
  }
  return best;
}

PaleyZygmund paley_zygmund_fraction(const Vector& v, double eta) {
  require(eta > 0.0, "paley_zygmund_fraction: eta must be positive");
  require(v.size() >= 1 && v.cwiseAbs().maxCoeff() > 0.0,
          "paley_zygmund_fraction: vector must not be identically zero");
  const double l1 = v.cwiseAbs().mean();
  PaleyZygmund out;
  out.beta_ratio = psi_alpha_norm(v, 1.0) / l1;
  const auto hits = (v.cwiseAbs().array() >= eta * l1).count();
  out.fraction = static_cast<double>(hits) / static_cast<double>(v.size());
  return out;
}

double empirical_smallball_fraction(const Matrix& A, const Vector& u, const Vector& v,
                                    double c1) {
  require(u.size() == A.cols() && v.size() == A.cols(),
          "empirical_smallball_fraction: dimension mismatch");
  require(A.rows() >= 1, "empirical_smallball_fraction: empty design");
  const double nu = u.norm(), nv = v.norm();
  require(nu > 0.0 && nv > 0.0, "empirical_smallball_fraction: u and v must be nonzero");
  const Eigen::ArrayXd prod = (A * u).array() * (A * v).array();
  const auto hits = (prod.abs() >= c1 * nu * nv).count();
  return static_cast<double>(hits) / static_cast<double>(A.rows());
}

double product_process_sup(const Matrix& A, std::span<const Vector> T1,
                           std::span<const Vector> T2) {
  require(!T1.empty() && !T2.empty(), "product_process_sup: empty candidate set");
  require(A.rows() >= 1, "product_process_sup: empty design");
  auto images = [&](std::span<const Vector> T) {
    Eigen::MatrixXd out(A.rows(), static_cast<Eigen::Index>(T.size()));
    for (std::size_t j = 0; j < T.size(); ++j) {
      require(T[j].size() == A.cols(), "product_process_sup: candidate dimension mismatch");
      out.col(static_cast<Eigen::Index>(j)) = A * T[j];
    }
    return out;
  };
  const Eigen::MatrixXd P = images(T1), Q = images(T2);
  const Eigen::MatrixXd emp = P.transpose() * Q / static_cast<double>(A.rows());
  double best = 0.0;
  for (std::size_t i = 0; i < T1.size(); ++i)
    for (std::size_t j = 0; j < T2.size(); ++j)
      best = std::max(best, std::abs(emp(static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(j)) -
                                     T1[i].dot(T2[j])));
  return best;
}

NormEquivalence norm_equivalence_check(const Vector& x, const Vector& x0, double R,
                                       double c1, double c2, double c_lower,
                                       double c_upper) {
  require(R > 0.0, "norm_equivalence_check: R must be positive");
  require(x.size() == x0.size(), "norm_equivalence_check: dimension mismatch");
  const double minus = (x - x0).norm(), plus = (x + x0).norm();
  const double product = minus * plus;
  const double norm0 = x0.norm();
  NormEquivalence out;
  out.small_norm_case = norm0 < std::sqrt(R) / 4.0;
  if (!out.small_norm_case) {
    const double lifted = norm0 * std::min(minus, plus);
    out.forward_holds = !(lifted >= R) || product >= c1 * R;
    out.backward_holds = !(product >= R) || lifted >= c2 * R;
  } else {
    const double nx = x.norm();
    out.forward_holds = !(nx >= c_upper * std::sqrt(R)) || product >= R;
    out.backward_holds = !(product >= R) || nx >= c_lower * std::sqrt(R);
  }
  return out;
}

}  // namespace phaselab
