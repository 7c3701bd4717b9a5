#include "shrinkage/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "shrinkage/errors.hpp"

namespace shrinkage {

namespace {

constexpr double kMixtureRelTol = 1e-15;
constexpr double kCutoffMass = 1e-12;

void check_law(int p, double lambda) {
  if (p < 1) throw DomainError("chi-square law: p must be >= 1, got " + std::to_string(p));
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("chi-square law: lambda must be finite and >= 0, got " +
                      std::to_string(lambda));
  }
}

double log_central_density(double k, double y) {
  const double h = 0.5 * k;
  return (h - 1.0) * std::log(y) - 0.5 * y - h * std::numbers::ln2 - log_gamma(h);
}

// Index of the largest term of the mixture sum at y: the ratio of
// consecutive terms is c / ((j+1)(h+j)) with c = lambda*y/4.
long mixture_mode(double h, double c) {
  const double b = h + 1.0;
  const double disc = b * b - 4.0 * (h - c);
  if (disc <= 0.0) return 0;
  const double root = 0.5 * (-b + std::sqrt(disc));
  return root <= 0.0 ? 0 : static_cast<long>(std::ceil(root));
}

}  // namespace

double log_gamma(double x) { return boost::math::lgamma(x); }

ChiSquareLaw::ChiSquareLaw(int p, double lambda) : p_(p), lambda_(lambda), cutoff_(0.0) {
  check_law(p, lambda);
  cutoff_ = survival_cutoff(*this, kCutoffMass);
}

double central_density(double k, double y) {
  if (!(k > 0.0)) throw DomainError("central_density: k must be > 0");
  if (!(y >= 0.0)) throw DomainError("central_density: y must be >= 0");
  if (y == 0.0) {
    if (k < 2.0) return std::numeric_limits<double>::infinity();
    return k == 2.0 ? 0.5 : 0.0;
  }
  if (std::isinf(y)) return 0.0;
  return std::exp(log_central_density(k, y));
}

double density(const ChiSquareLaw& law, double y) {
  if (!(y >= 0.0)) throw DomainError("density: y must be >= 0, got " + std::to_string(y));
  const double h = 0.5 * law.dof();
  const double lambda = law.noncentrality();
  if (lambda == 0.0) return central_density(law.dof(), y);
  if (y == 0.0) return central_density(law.dof(), 0.0) * std::exp(-0.5 * lambda);
  if (std::isinf(y)) return 0.0;

  const double c = 0.25 * lambda * y;
  const long mode = mixture_mode(h, c);
  const double jm = static_cast<double>(mode);
  const double log_mode_term = -0.5 * lambda + jm * std::log(0.5 * lambda) -
                               log_gamma(jm + 1.0) + log_central_density(2.0 * (h + jm), y);

  double sum = 1.0;
  double term = 1.0;
  for (long j = mode;; ++j) {
    const double jd = static_cast<double>(j);
    term *= c / ((jd + 1.0) * (h + jd));
    sum += term;
    if (term < kMixtureRelTol * sum) break;
  }
  term = 1.0;
  for (long j = mode; j > 0; --j) {
    const double jd = static_cast<double>(j);
    term *= jd * (h + jd - 1.0) / c;
    sum += term;
    if (term < kMixtureRelTol * sum) break;
  }
  return std::exp(log_mode_term) * sum;
}

double survival(const ChiSquareLaw& law, double w) {
  if (!(w >= 0.0)) throw DomainError("survival: w must be >= 0");
  if (std::isinf(w)) return 0.0;
  const double h = 0.5 * law.dof();
  const double half_lambda = 0.5 * law.noncentrality();
  if (half_lambda == 0.0) return boost::math::gamma_q(h, 0.5 * w);

  const long mode = static_cast<long>(std::floor(half_lambda));
  auto weight = [&](long j) {
    const double jd = static_cast<double>(j);
    return std::exp(-half_lambda + jd * std::log(half_lambda) - log_gamma(jd + 1.0));
  };
  double sum = 0.0;
  for (long j = mode;; ++j) {
    const double pi = weight(j);
    sum += pi * boost::math::gamma_q(h + static_cast<double>(j), 0.5 * w);
    if (pi < 1e-20) break;
  }
  for (long j = mode - 1; j >= 0; --j) {
    const double term = weight(j) * boost::math::gamma_q(h + static_cast<double>(j), 0.5 * w);
    sum += term;
    if (term < 1e-20) break;
  }
  return std::min(sum, 1.0);
}

double survival_cutoff(const ChiSquareLaw& law, double mass) {
  if (!(mass > 0.0 && mass < 1.0)) throw DomainError("survival_cutoff: mass must be in (0,1)");
  double lo = 0.0;
  double hi = law.dof() + law.noncentrality() + 10.0;
  while (survival(law, hi) > mass) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (survival(law, mid) > mass) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double g_weight(const ChiSquareLaw& law, double w, const quad::Tolerance& tol) {
  if (law.dof() < 3) {
    throw DomainError("g_weight: requires p >= 3 (y^{-1} f_p is not integrable at 0), got p=" +
                      std::to_string(law.dof()));
  }
  if (!(w >= 0.0)) throw DomainError("g_weight: w must be >= 0, got " + std::to_string(w));
  if (w == 0.0) return 0.0;
  // Mass above the cutoff contributes less than 1e-12 / cutoff.
  const double span = std::min(w, law.upper_cutoff());
  auto integrand = [&](double s) { return 2.0 * density(law, span * s * s) / s; };
  return quad::integrate_or_throw(integrand, 0.0, 1.0, tol, "g_weight");
}

}  // namespace shrinkage
