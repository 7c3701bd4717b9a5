#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "shrinkage/execution.hpp"

namespace shrinkage {

/// Power series
///   psi(alpha, w) = sum_{i>=0} w^i prod_{j=0}^{i} (p - 2 + 2j/alpha)^{-1},
/// equivalently 1F1(1; a+1; alpha w / 2) / (p - 2) with a = alpha (p/2 - 1).
class PsiSeries {
 public:
  PsiSeries(int p, double alpha, double truncation_tol = 1e-14,
            std::size_t max_terms = 1'000'000);

  int dim() const { return p_; }
  double alpha() const { return alpha_; }
  double shape() const { return shape_; }  // a = alpha (p/2 - 1)
  double truncation_tol() const { return tol_; }
  std::size_t max_terms() const { return max_terms_; }

  // 1 / (p - 2 + 2j/alpha)
  double coefficient_ratio(std::size_t j) const;
  double log_gamma_shape() const { return lgamma_a_; }

 private:
  int p_;
  double alpha_;
  double shape_;
  double tol_;
  std::size_t max_terms_;
  double lgamma_a_;
  std::shared_ptr<const std::vector<double>> ratios_;
};

struct PsiValue {
  double psi = 0.0;          // may be +inf past double range
  double log_psi = 0.0;
  double log_psi_minus_z = 0.0;  // log psi - alpha w / 2
  double tail_over_w = 0.0;  // (psi - psi(0)) / w
  double dpsi = 0.0;         // d psi / dw
  std::size_t terms = 0;     // 0 in the saturated regime
  bool saturated = false;    // closed-form regime, 1/psi below double resolution
};

/// Evaluates the series and its derivative. Where the upper incomplete
/// gamma remainder of the closed form drops below 1e-16 the closed form is
/// used instead of summing, which is exact to double precision there.
/// Throws TruncationError when max_terms is reached first.
PsiValue evaluate_psi(const PsiSeries& series, double w);

double psi(const PsiSeries& series, double w);
double log_psi(const PsiSeries& series, double w);

// Shrinkage families phi(w). Each family carries the dimension p.
namespace family {
struct Constant {
  double c;
};
struct PositivePart {};
struct Alpha {
  double alpha;
};
struct LiKuo1 {
  double b1;
};
struct KurikiTakemura1 {
  double r;
};
struct KurikiTakemura2 {
  double r;
};
}  // namespace family

using FamilySpec = std::variant<family::Constant, family::PositivePart, family::Alpha,
                                family::LiKuo1, family::KurikiTakemura1,
                                family::KurikiTakemura2>;

struct PhiValue {
  double phi = 0.0;
  double phi_prime = 0.0;
  double ratio = 0.0;  // phi / w, with its limit at w = 0 where one exists
};

class PhiFamily {
 public:
  PhiFamily(int p, FamilySpec spec);

  static PhiFamily constant(int p, double c) { return {p, family::Constant{c}}; }
  static PhiFamily identity(int p) { return constant(p, 0.0); }
  static PhiFamily james_stein(int p) { return constant(p, p - 2.0); }
  static PhiFamily positive_part(int p) { return {p, family::PositivePart{}}; }
  static PhiFamily alpha(int p, double a) { return {p, family::Alpha{a}}; }
  static PhiFamily kubokawa(int p) { return alpha(p, 1.0); }
  static PhiFamily li_kuo(int p, double b1) { return {p, family::LiKuo1{b1}}; }
  static PhiFamily kuriki_takemura_1(int p, double r) { return {p, family::KurikiTakemura1{r}}; }
  static PhiFamily kuriki_takemura_2(int p, double r) { return {p, family::KurikiTakemura2{r}}; }

  int dim() const { return p_; }
  const FamilySpec& spec() const { return spec_; }

  /// Short tag such as "alpha:2", "pp", "const:3", "likuo:0.2".
  std::string name() const;

  bool is_constant() const { return std::holds_alternative<family::Constant>(spec_); }

  /// Constant(c) dominates X only for 0 < c < 2(p-2); other families
  /// always report true here.
  bool in_dominating_range() const;

  /// phi(w)/w stays bounded as w -> 0, so the origin maps to the origin.
  bool bounded_at_origin() const;

  /// lim phi(w) as w -> inf: c for Constant(c), p-2 for every other family.
  double limit_at_infinity() const;

  /// Points where phi' jumps.
  std::vector<double> kinks() const;

  /// phi, phi' (right derivative at kinks) and phi/w at w >= 0.
  PhiValue evaluate(double w) const;

  /// Li-Kuo a_1 coefficient, 0 for other families.
  double li_kuo_a() const { return li_kuo_a_; }

 private:
  int p_;
  FamilySpec spec_;
  double li_kuo_a_ = 0.0;
  std::shared_ptr<const PsiSeries> series_;
};

double phi(const PhiFamily& fam, double w);
double phi_prime(const PhiFamily& fam, double w);

/// a_1 = 2 b1 2^{b1} Gamma(p/2 - b1 - 1) / Gamma(p/2 - 2 b1 - 1) for
/// 0 < b1 < (p-2)/4.
double li_kuo_coefficient(int p, double b1);

/// x -> (1 - phi(|x|^2)/|x|^2) x.
std::vector<double> apply(const PhiFamily& fam, std::span<const double> x);

/// fam.evaluate over a grid; the parallel path splits the grid over OpenMP
/// threads and returns the same values.
std::vector<PhiValue> evaluate_grid(const PhiFamily& fam, std::span<const double> w,
                                    Execution exec = Execution::Parallel);

}  // namespace shrinkage
