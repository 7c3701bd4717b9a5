#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace shrinkage::quad {

struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-10;
  std::size_t max_panels = std::size_t{1} << 20;
};

struct Result {
  double value = 0.0;
  double error = 0.0;   // sum of per-panel |Kronrod - Gauss|
  std::size_t panels = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.
/// The panel with the largest embedded-rule error estimate is bisected
/// until the total estimate meets max(abs, rel*|value|) or the panel
/// budget is exhausted. Endpoints are never evaluated, so integrable
/// endpoint singularities are tolerated.
Result integrate(const Integrand& f, double a, double b, const Tolerance& tol = {});

/// Sums `integrate` over consecutive intervals [pts[i], pts[i+1]].
Result integrate_pieces(const Integrand& f, std::span<const double> pts,
                        const Tolerance& tol = {});

/// Same as integrate() but throws QuadratureError when not converged.
double integrate_or_throw(const Integrand& f, double a, double b,
                          const Tolerance& tol = {}, const char* what = "integral");

}  // namespace shrinkage::quad
