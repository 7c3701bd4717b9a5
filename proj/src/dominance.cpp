#include "shrinkage/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shrinkage/errors.hpp"
#include "shrinkage/risk.hpp"

namespace shrinkage {

namespace {

constexpr double kJsInequalityTol = 1e-12;

void check_grid(std::span<const double> grid) {
  if (grid.size() < 50) {
    throw std::invalid_argument("condition grid needs >= 50 points, got " +
                                std::to_string(grid.size()));
  }
  if (grid.front() != 0.0) throw std::invalid_argument("condition grid must start at w = 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("condition grid must be strictly increasing");
    }
  }
}

}  // namespace

std::string_view to_string(ConditionVerdict v) {
  switch (v) {
    case ConditionVerdict::SatisfiesKubokawa:
      return "SatisfiesKubokawa";
    case ConditionVerdict::FailsMonotone:
      return "FailsMonotone";
    case ConditionVerdict::FailsLowerBound:
      return "FailsLowerBound";
    case ConditionVerdict::FailsUpperBound:
      return "FailsUpperBound";
    case ConditionVerdict::FailsLimit:
      return "FailsLimit";
  }
  return "unknown";
}

bool DominanceReport::margins_nonnegative(double tol) const {
  return std::all_of(risk_margin.begin(), risk_margin.end(),
                     [tol](const MarginRow& r) { return r.margin >= -tol; });
}

ConditionCheck check_kubokawa_condition(const PhiFamily& fam, std::span<const double> grid) {
  check_grid(grid);
  const PhiFamily kubokawa = PhiFamily::kubokawa(fam.dim());
  const double q = fam.dim() - 2.0;
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid[i];
    const double value = phi(fam, w);
    if (value > q + kConditionEps) return {ConditionVerdict::FailsUpperBound, w};
    if (value < phi(kubokawa, w) - kConditionEps) return {ConditionVerdict::FailsLowerBound, w};
    if (i > 0 && value < previous - kConditionEps) return {ConditionVerdict::FailsMonotone, w};
    previous = value;
  }
  if (!has_js_limit(fam)) return {ConditionVerdict::FailsLimit, grid.back()};
  return {};
}

std::vector<MarginRow> risk_margin_table(const PhiFamily& fam, std::span<const double> lambdas) {
  const PhiFamily js = PhiFamily::james_stein(fam.dim());
  const bool identity_applies = has_js_limit(fam);
  std::vector<MarginRow> rows;
  rows.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const RiskPoint r_js = risk_quadrature(js, lambda);
    const RiskPoint r_fam = risk_quadrature(fam, lambda);
    MarginRow row;
    row.lambda = lambda;
    row.margin = r_js.value - r_fam.value;
    row.quad_error = r_js.quad_error + r_fam.quad_error;
    if (identity_applies) row.kubokawa_diff = kubokawa_risk_diff(fam, lambda);
    rows.push_back(row);
  }
  return rows;
}

double js_inequality_value(const PhiFamily& fam, double w) {
  const PhiValue v = fam.evaluate(w);
  if (!std::isfinite(v.phi)) return -std::numeric_limits<double>::infinity();
  const double gap = v.phi - (fam.dim() - 2.0);
  return -gap * gap + 4.0 * w * v.phi_prime;
}

std::optional<JsWitness> js_inequality_scan(const PhiFamily& fam, std::span<const double> grid) {
  for (double w : grid) {
    const double value = js_inequality_value(fam, w);
    if (value < -kJsInequalityTol) return JsWitness{w, value};
  }
  return std::nullopt;
}

DominanceReport assess_dominance(const PhiFamily& fam, std::span<const double> condition_grid,
                                 std::span<const double> lambdas, double tol) {
  const ConditionCheck check = check_kubokawa_condition(fam, condition_grid);
  DominanceReport report{fam, check.verdict, check.witness_w, risk_margin_table(fam, lambdas),
                         std::nullopt, false};
  if (has_js_limit(fam)) report.origin_gain = risk_diff_at_origin(fam);
  report.strict_improvement =
      std::any_of(report.risk_margin.begin(), report.risk_margin.end(),
                  [tol](const MarginRow& r) { return r.margin > tol; }) ||
      (report.origin_gain && *report.origin_gain > tol);
  return report;
}

std::vector<double> standard_w_grid() {
  std::vector<double> grid{0.0, 0.5};
  for (int k = 0; k < 8; ++k) grid.push_back(std::pow(10.0, -2.0 + 0.25 * k));
  for (int i = 1; i <= 50; ++i) grid.push_back(static_cast<double>(i));
  std::sort(grid.begin(), grid.end());
  return grid;
}

std::vector<double> dominance_grid(double w_max, std::size_t n) {
  if (n < 3 || !(w_max > 1e-4)) throw std::invalid_argument("dominance_grid: bad arguments");
  std::vector<double> grid{0.0};
  const double lo = std::log(1e-4);
  const double hi = std::log(w_max);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    grid.push_back(std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 2)));
  }
  grid.back() = w_max;
  return grid;
}

std::vector<double> standard_lambda_grid() { return {0.0, 1.0, 4.0, 9.0, 25.0}; }

}  // namespace shrinkage
