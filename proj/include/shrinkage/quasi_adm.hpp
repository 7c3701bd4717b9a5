#pragma once

// Pseudo-Bayes estimators delta_m(X) = X + grad log m(|X|^2)
//   = (1 + 2 m'(w)/m(w)) X,  w = |X|^2,
// the improvement functional Delta(m, mk) for competitors
// delta_m + k(|X|^2) X, and a numeric probe of the divergence criterion
//   int_0^1 w^{-p/2} / m(w) dw = inf  and  int_1^inf w^{-p/2} / m(w) dw = inf.
//
// m is always a function of w = |x|^2. The James-Stein estimator therefore
// has m(w) = w^{1 - p/2}, i.e. |x|^{2-p}.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shrinkage/estimators.hpp"
#include "shrinkage/monte_carlo.hpp"
#include "shrinkage/pchip.hpp"

namespace shrinkage {

namespace marginal {
struct PowerLaw {
  double exponent;  // m(w) = w^exponent
};
struct AlphaMarginal {
  double alpha;
};
struct Custom {
  std::shared_ptr<const MonotoneCubic> log_m;  // log m as a function of log w
};
}  // namespace marginal

class MarginalFn {
 public:
  static MarginalFn power_law(int p, double exponent);
  static MarginalFn james_stein(int p) { return power_law(p, 1.0 - 0.5 * p); }
  static MarginalFn flat(int p) { return power_law(p, 0.0); }
  /// m_alpha(w) = (int_0^1 t^{alpha(p/2-1)-1} exp(-alpha w t / 2) dt)^{1/alpha}
  static MarginalFn alpha(int p, double alpha);
  /// Tabulated log m at increasing w > 0; interpolated in (log w, log m)
  /// and extended as a power law beyond the table.
  static MarginalFn tabulated(int p, std::vector<double> w, std::vector<double> log_m);

  int dim() const { return p_; }
  std::string name() const;

  double log_m(double w) const;
  double log_derivative(double w) const;         // m'/m
  double log_second_derivative(double w) const;  // d/dw (m'/m)

  /// Family whose phi satisfies phi(w) = -2 w m'(w)/m(w), when it is one of
  /// the shrinkage families.
  std::optional<PhiFamily> associated_family() const;

 private:
  using Kind = std::variant<marginal::PowerLaw, marginal::AlphaMarginal, marginal::Custom>;
  MarginalFn(int p, Kind kind);

  int p_;
  Kind kind_;
  std::shared_ptr<const PsiSeries> series_;
  std::optional<PhiFamily> family_;
};

/// m'(w)/m(w), w > 0.
double log_m_derivative(const MarginalFn& m, double w);

/// Competitor direction k(w) with derivative, delta_{m,k} = delta_m + k X.
struct CompetitorK {
  std::function<double(double)> k;
  std::function<double(double)> dk;
  std::string description;
  std::vector<double> kinks;

  static CompetitorK zero();
  /// k(w) = (p-2)/w - 1 on w < p-2, 0 beyond: turns the James-Stein
  /// estimator into its positive part.
  static CompetitorK positive_part(int p);
  static CompetitorK tabulated(std::vector<double> w, std::vector<double> k,
                               std::string description);
};

/// Delta(m, mk) = 4 w (m'/m) k + 2 p k + 4 w k' + w k^2.
double delta_functional(const MarginalFn& m, const CompetitorK& comp, double w);

/// SURE of delta_{m,k} from the general form p + |g|^2 + 2 div g with
/// g(x) = h(w) x, h = 2 m'/m + k.
double sure_pseudo_bayes(const MarginalFn& m, const CompetitorK& comp, double w);

struct DeltaSureCheck {
  double mc_mean = 0.0;   // mean of SURE(delta_{m,k}) - SURE(delta_m)
  double mc_se = 0.0;
  double expected_delta = 0.0;  // E_lambda[Delta(m, mk)(W)] by quadrature
  double quad_error = 0.0;
};

DeltaSureCheck delta_sure_consistency(const MarginalFn& m, const CompetitorK& comp,
                                      double lambda, const McConfig& cfg,
                                      Execution exec = Execution::Parallel);

enum class SideVerdict { Divergent, Convergent, Inconclusive };
enum class QaVerdict { QuasiAdmissible, NotCertified, Inconclusive };

std::string_view to_string(SideVerdict v);
std::string_view to_string(QaVerdict v);

struct DecadeIncrement {
  double lo;
  double hi;
  double increment;
  double cumulative;
};

struct SideReport {
  std::vector<DecadeIncrement> increments;  // ordered away from w = 1
  SideVerdict verdict = SideVerdict::Inconclusive;
};

struct ProbeConfig {
  int decades = 6;  // T = 10, ..., 10^decades and eps = 10^-1, ..., 10^-decades
};

struct ProbeReport {
  SideReport origin;  // int_eps^1
  SideReport tail;    // int_1^T
  QaVerdict verdict = QaVerdict::Inconclusive;
};

/// Classifies decade increments of an integral that may diverge.
/// Divergent: the last three increments each exceed half of the increment
/// just before them and the last ratio is >= 0.99. Convergent: the last
/// increment is below 1e-6 of the running total, or the last three ratios
/// are <= 0.5. Otherwise Inconclusive.
SideVerdict classify_increments(const std::vector<DecadeIncrement>& increments);

ProbeReport divergence_probe(const MarginalFn& m, const ProbeConfig& cfg = {});

}  // namespace shrinkage
