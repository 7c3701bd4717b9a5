#pragma once

#include "shrinkage/quadrature.hpp"

namespace shrinkage {

/// Thread-safe log-gamma for positive arguments.
double log_gamma(double x);

/// Distribution of ||X||^2 for X ~ N_p(theta, I), lambda = ||theta||^2.
class ChiSquareLaw {
 public:
  ChiSquareLaw(int p, double lambda);

  int dof() const { return p_; }
  double noncentrality() const { return lambda_; }

  /// Point beyond which the survival mass is below 1e-12.
  double upper_cutoff() const { return cutoff_; }

 private:
  int p_;
  double lambda_;
  double cutoff_;
};

/// f_p(y; lambda) as a Poisson mixture of central densities, summed in
/// log-space outward from the largest mixture term.
double density(const ChiSquareLaw& law, double y);

/// Central chi-square density f_k(y) for real k > 0.
double central_density(double k, double y);

/// P(W > w) for W ~ law.
double survival(const ChiSquareLaw& law, double w);

/// Smallest (to 1e-6 relative) w with survival(law, w) <= mass.
double survival_cutoff(const ChiSquareLaw& law, double mass);

/// G_p(w; lambda) = int_0^w y^{-1} f_p(y; lambda) dy, p >= 3.
///
/// Evaluated on the unit interval through y = w t and t = s^2, i.e.
/// G = int_0^1 2 s^{-1} f_p(w s^2) ds, whose integrand behaves like s^{p-3}
/// at the origin and is therefore bounded for every p >= 3.
double g_weight(const ChiSquareLaw& law, double w, const quad::Tolerance& tol = {});

}  // namespace shrinkage
