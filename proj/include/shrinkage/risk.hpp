#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>

#include "shrinkage/estimators.hpp"
#include "shrinkage/monte_carlo.hpp"
#include "shrinkage/quadrature.hpp"
#include "shrinkage/special_functions.hpp"

namespace shrinkage {

enum class RiskMethod { MonteCarlo, Sure, Quadrature, KubokawaDiff };

std::string_view to_string(RiskMethod m);

/// Risk E||delta(X) - theta||^2 at lambda = ||theta||^2. The engine works
/// with theta = (sqrt(lambda), 0, ..., 0); risk depends on theta only
/// through lambda.
struct RiskPoint {
  double lambda;
  PhiFamily estimator;
  double value;
  RiskMethod method;
  double std_error = 0.0;   // Monte Carlo standard error
  double quad_error = 0.0;  // quadrature error estimate
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::size_t skipped = 0;
};

/// Loss average and SURE average over the same draws.
struct McRisk {
  RiskPoint risk;
  RiskPoint sure;
  double difference_se = 0.0;  // standard error of mean(loss - SURE)
};

/// Stein's unbiased risk estimate of delta_phi at x:
///   p - phi(w)(2(p-2) - phi(w))/w - 4 phi'(w),  w = |x|^2.
double sure(const PhiFamily& fam, std::span<const double> x);
double sure_at(const PhiFamily& fam, double w);

McRisk simulate_risk(const PhiFamily& fam, double lambda, const McConfig& cfg,
                     Execution exec = Execution::Parallel);

RiskPoint risk_mc(const PhiFamily& fam, double lambda, const McConfig& cfg,
                  Execution exec = Execution::Parallel);

/// E_lambda[h(W)] over the noncentral chi-square law, integrated in
/// u = sqrt(w) on [0, sqrt(cutoff)] and split at the given kinks.
quad::Result chi_square_expectation(const ChiSquareLaw& law, const std::function<double(double)>& h,
                                    std::span<const double> kinks = {},
                                    const quad::Tolerance& tol = {});

/// p - E_lambda[phi(2(p-2) - phi)/W + 4 phi'(W)].
RiskPoint risk_quadrature(const PhiFamily& fam, double lambda);

/// True when phi(w) -> p-2 as w -> inf.
bool has_js_limit(const PhiFamily& fam);

/// R(theta, JS) - R(theta, delta_phi) as
///   2 int_0^inf phi'(w) [ (phi(w) - (p-2)) G_p(w; lambda) + 2 f_p(w; lambda) ] dw.
/// Throws UnsupportedFamily when phi does not tend to p-2.
double kubokawa_risk_diff(const PhiFamily& fam, double lambda);

/// R(0, JS) - R(0, delta_phi) = 2 int phi'(w)(phi(w) - phi_K(w)) G_p(w; 0) dw.
double risk_diff_at_origin(const PhiFamily& fam);

/// p - 2 - 2 f_p(w) / G_p(w) on the central law (limit 0 at w = 0). This is
/// the Kubokawa shrinkage function written through the chi-square density.
double kubokawa_phi0(int p, double w);

}  // namespace shrinkage
