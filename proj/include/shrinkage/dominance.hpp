#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "shrinkage/estimators.hpp"

namespace shrinkage {

enum class ConditionVerdict {
  SatisfiesKubokawa,
  FailsMonotone,
  FailsLowerBound,
  FailsUpperBound,
  FailsLimit,
};

std::string_view to_string(ConditionVerdict v);

struct ConditionCheck {
  ConditionVerdict verdict = ConditionVerdict::SatisfiesKubokawa;
  std::optional<double> witness_w;  // set iff verdict is a failure
};

struct MarginRow {
  double lambda = 0.0;
  double margin = 0.0;      // R(JS) - R(delta_phi), quadrature
  double quad_error = 0.0;  // sum of both quadrature error estimates
  std::optional<double> kubokawa_diff;  // same quantity through the identity
};

struct DominanceReport {
  PhiFamily estimator;
  ConditionVerdict condition_verdict;
  std::optional<double> witness_w;
  std::vector<MarginRow> risk_margin;
  std::optional<double> origin_gain;  // risk_diff_at_origin, when phi -> p-2
  bool strict_improvement = false;    // some margin or the origin gain exceeds tol

  bool margins_nonnegative(double tol) const;
};

inline constexpr double kConditionEps = 1e-9;
inline constexpr double kMarginTol = 1e-6;

/// Grid check of: phi nondecreasing and phi_K(w) <= phi(w) <= p-2, plus the
/// limit phi -> p-2. This is a grid verification, not a proof on the
/// continuum. The grid must start at 0, increase strictly and hold >= 50
/// points.
ConditionCheck check_kubokawa_condition(const PhiFamily& fam, std::span<const double> grid);

std::vector<MarginRow> risk_margin_table(const PhiFamily& fam, std::span<const double> lambdas);

/// -(phi(w) - p + 2)^2 + 4 w phi'(w); -inf where phi is -inf.
double js_inequality_value(const PhiFamily& fam, double w);

struct JsWitness {
  double w;
  double value;
};

/// First grid point where js_inequality_value < -1e-12.
std::optional<JsWitness> js_inequality_scan(const PhiFamily& fam, std::span<const double> grid);

DominanceReport assess_dominance(const PhiFamily& fam, std::span<const double> condition_grid,
                                 std::span<const double> lambdas, double tol = kMarginTol);

/// 60 points: 0, 10^{-2 + k/4} for k = 0..7, 0.5, and 1, 2, ..., 50.
std::vector<double> standard_w_grid();

/// 0 followed by n-1 log-spaced points on [1e-4, w_max].
std::vector<double> dominance_grid(double w_max = 1e4, std::size_t n = 1000);

/// {0, 1, 4, 9, 25}
std::vector<double> standard_lambda_grid();

}  // namespace shrinkage
