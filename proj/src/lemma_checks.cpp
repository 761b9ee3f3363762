#include "phaselab/lemma_checks.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "phaselab/empirics.hpp"
#include "phaselab/error.hpp"

namespace phaselab {

Vector sample_lemma_vector(Engine& engine, int m) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector v(m);
  const int family = std::uniform_int_distribution<int>(0, 4)(engine);
  switch (family) {
    case 0:  // gaussian
      for (int i = 0; i < m; ++i) v[i] = gauss(engine);
      break;
    case 1: {  // |g|^p, p in [0.5, 3]: lighter or heavier than gaussian
      const double p = 0.5 + 2.5 * unif(engine);
      for (int i = 0; i < m; ++i) v[i] = std::pow(std::abs(gauss(engine)), p);
      break;
    }
    case 2: {  // sparse gaussian with density in [1/m, 1]
      const double density = std::exp(std::log(1.0 / m) * unif(engine));
      for (int i = 0; i < m; ++i) v[i] = unif(engine) < density ? gauss(engine) : 0.0;
      if (v.cwiseAbs().maxCoeff() == 0.0) v[0] = 1.0;
      break;
    }
    case 3:  // exponential
      for (int i = 0; i < m; ++i) v[i] = -std::log(1.0 - unif(engine));
      break;
    default: {  // flat block plus a spike
      const int k = std::uniform_int_distribution<int>(1, m)(engine);
      v.setZero();
      v.head(k).setOnes();
      v[0] += 5.0 * unif(engine);
      break;
    }
  }
  return v;
}

void sample_norm_triple(Engine& engine, Vector& x, Vector& x0) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto direction = [&] {
    Vector u(3);
    for (int i = 0; i < 3; ++i) u[i] = gauss(engine);
    return Vector(u / u.norm());
  };
  // ||x0|| log-uniform in [1/64, 8] so both cases and the boundary sqrt(R)/4 are hit.
  x0 = direction() * std::exp(std::log(1.0 / 64) + unif(engine) * std::log(512.0));
  const double scale = std::exp(std::log(1.0 / 64) + unif(engine) * std::log(1024.0));
  switch (std::uniform_int_distribution<int>(0, 2)(engine)) {
    case 0:
      x = direction() * scale;
      break;
    case 1:  // near ±x0 along its own axis
      x = (unif(engine) < 0.5 ? 1.0 : -1.0) * x0 + (unif(engine) < 0.5 ? 1.0 : -1.0) * scale * x0 / x0.norm();
      break;
    default:
      x = x0 + direction() * scale;
      break;
  }
}

namespace {

CheckOutcome check_norm(const CheckOptions& opt) {
  Engine engine = make_engine(opt.seed, Stream::check, 1);
  Vector x(3), x0(3);
  long long failures = 0, small = 0;
  for (long long k = 0; k < opt.norm_triples; ++k) {
    sample_norm_triple(engine, x, x0);
    const auto r = norm_equivalence_check(x, x0, 1.0, frozen::norm_c1, frozen::norm_c2,
                                          frozen::small_lower, frozen::small_upper);
    if (!r.forward_holds || !r.backward_holds) ++failures;
    if (r.small_norm_case) ++small;
  }
  std::ostringstream os;
  os << opt.norm_triples << " triples (" << small << " small-norm), " << failures
     << " counterexamples; c1=" << frozen::norm_c1 << " c2=" << frozen::norm_c2
     << " small=[" << frozen::small_lower << ", " << frozen::small_upper << "]";
  return {"norm-equivalence", failures == 0, os.str()};
}

CheckOutcome check_rearrangement(const CheckOptions& opt) {
  Engine engine = make_engine(opt.seed, Stream::check, 2);
  const int sizes[] = {10, 100, 1000};
  long long failures = 0, total = 0;
  std::ostringstream os;
  for (const auto& b : frozen::rearrangement) {
    double lo = INFINITY, hi = 0.0;
    for (int k = 0; k < opt.vectors; ++k) {
      const Vector v = sample_lemma_vector(engine, sizes[k % 3]);
      const double ratio = psi_alpha_norm(v, b.alpha) / rearrangement_functional(v, b.alpha);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      if (ratio < b.lo || ratio > b.hi) ++failures;
      ++total;
    }
    os << "alpha=" << b.alpha << " ratio in [" << lo << ", " << hi << "] vs frozen ["
       << b.lo << ", " << b.hi << "]; ";
  }
  os << failures << "/" << total << " outside";
  return {"rearrangement", failures == 0, os.str()};
}

CheckOutcome check_paley_zygmund(const CheckOptions& opt) {
  Engine engine = make_engine(opt.seed, Stream::check, 3);
  const int sizes[] = {10, 100, 1000};
  long long failures = 0;
  std::ostringstream os;
  for (const auto& f : frozen::paley_zygmund) {
    int eligible = 0;
    double worst = 1.0;
    for (int k = 0; k < opt.vectors; ++k) {
      const Vector v = sample_lemma_vector(engine, sizes[k % 3]);
      const auto pz = paley_zygmund_fraction(v, f.eta);
      if (pz.beta_ratio > f.beta) continue;
      ++eligible;
      worst = std::min(worst, pz.fraction);
      if (pz.fraction < f.floor) ++failures;
    }
    os << "beta=" << f.beta << ": " << eligible << " vectors, min fraction " << worst
       << " vs floor " << f.floor << "; ";
    if (eligible == 0) ++failures;
  }
  os << failures << " failures";
  return {"paley-zygmund", failures == 0, os.str()};
}

}  // namespace

std::vector<std::string> check_suite_names() {
  return {"norm-equivalence", "rearrangement", "paley-zygmund", "all"};
}

std::vector<CheckOutcome> run_check_suite(const std::string& suite, const CheckOptions& options) {
  require(options.norm_triples >= 1 && options.vectors >= 1, "check: counts must be positive");
  std::vector<CheckOutcome> out;
  const bool all = suite == "all";
  if (all || suite == "norm-equivalence") out.push_back(check_norm(options));
  if (all || suite == "rearrangement") out.push_back(check_rearrangement(options));
  if (all || suite == "paley-zygmund") out.push_back(check_paley_zygmund(options));
  if (out.empty())
    fail(ErrorCode::invalid_argument,
         "check: unknown suite '" + suite + "' (norm-equivalence, rearrangement, paley-zygmund, all)");
  return out;
}

}  // namespace phaselab
