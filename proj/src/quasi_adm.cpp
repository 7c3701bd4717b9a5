#include "shrinkage/quasi_adm.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "shrinkage/errors.hpp"
#include "shrinkage/quadrature.hpp"
#include "shrinkage/risk.hpp"
#include "shrinkage/special_functions.hpp"

namespace shrinkage {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void check_positive_w(double w, const char* what) {
  if (!(w > 0.0)) throw DomainError(std::string(what) + ": w must be > 0");
}

}  // namespace

MarginalFn::MarginalFn(int p, Kind kind) : p_(p), kind_(std::move(kind)) {
  if (p < 3) throw DomainError("marginal: p must be >= 3");
}

MarginalFn MarginalFn::power_law(int p, double exponent) {
  if (!std::isfinite(exponent)) throw DomainError("power_law: exponent must be finite");
  MarginalFn m(p, marginal::PowerLaw{exponent});
  m.family_ = PhiFamily::constant(p, -2.0 * exponent);
  return m;
}

MarginalFn MarginalFn::alpha(int p, double alpha) {
  MarginalFn m(p, marginal::AlphaMarginal{alpha});
  m.series_ = std::make_shared<const PsiSeries>(p, alpha);
  m.family_ = PhiFamily::alpha(p, alpha);
  return m;
}

MarginalFn MarginalFn::tabulated(int p, std::vector<double> w, std::vector<double> log_m) {
  if (w.size() != log_m.size() || w.size() < 2) {
    throw std::invalid_argument("tabulated marginal: need >= 2 (w, log m) pairs");
  }
  std::vector<double> log_w(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0)) throw DomainError("tabulated marginal: w must be > 0");
    if (!std::isfinite(log_m[i])) throw DomainError("tabulated marginal: log m must be finite");
    log_w[i] = std::log(w[i]);
  }
  auto interp = std::make_shared<const MonotoneCubic>(std::move(log_w), std::move(log_m));
  return MarginalFn(p, marginal::Custom{std::move(interp)});
}

std::string MarginalFn::name() const {
  return std::visit(overloaded{
                        [&](const marginal::PowerLaw& k) -> std::string {
                          if (k.exponent == 1.0 - 0.5 * p_) return "js";
                          if (k.exponent == 0.0) return "identity";
                          return "power:" + format_number(k.exponent);
                        },
                        [](const marginal::AlphaMarginal& k) -> std::string {
                          return "alpha:" + format_number(k.alpha);
                        },
                        [](const marginal::Custom&) -> std::string { return "table"; },
                    },
                    kind_);
}

double MarginalFn::log_m(double w) const {
  return std::visit(
      overloaded{
          [&](const marginal::PowerLaw& k) {
            check_positive_w(w, "log_m");
            return k.exponent * std::log(w);
          },
          [&](const marginal::AlphaMarginal& k) {
            if (!(w >= 0.0)) throw DomainError("log_m: w must be >= 0");
            // int_0^1 t^{a-1} e^{-z t} dt = 2 psi e^{-z} / alpha
            const PsiValue v = evaluate_psi(*series_, w);
            return (std::numbers::ln2 - std::log(k.alpha) + v.log_psi_minus_z) / k.alpha;
          },
          [&](const marginal::Custom& k) {
            check_positive_w(w, "log_m");
            return k.log_m->value(std::log(w));
          },
      },
      kind_);
}

double MarginalFn::log_derivative(double w) const {
  check_positive_w(w, "log_m_derivative");
  return std::visit(overloaded{
                        [&](const marginal::PowerLaw& k) { return k.exponent / w; },
                        [&](const marginal::AlphaMarginal&) {
                          // 2 w m'/m = -phi_alpha(w)
                          return -0.5 * family_->evaluate(w).ratio;
                        },
                        [&](const marginal::Custom& k) {
                          return k.log_m->derivative(std::log(w)) / w;
                        },
                    },
                    kind_);
}

double MarginalFn::log_second_derivative(double w) const {
  check_positive_w(w, "log_m_second_derivative");
  return std::visit(overloaded{
                        [&](const marginal::PowerLaw& k) { return -k.exponent / (w * w); },
                        [&](const marginal::AlphaMarginal&) {
                          const PhiValue v = family_->evaluate(w);
                          return (v.ratio - v.phi_prime) / (2.0 * w);
                        },
                        [&](const marginal::Custom& k) {
                          const double s = std::log(w);
                          return (k.log_m->second_derivative(s) - k.log_m->derivative(s)) / (w * w);
                        },
                    },
                    kind_);
}

std::optional<PhiFamily> MarginalFn::associated_family() const { return family_; }

double log_m_derivative(const MarginalFn& m, double w) { return m.log_derivative(w); }

CompetitorK CompetitorK::zero() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, "zero", {}};
}

CompetitorK CompetitorK::positive_part(int p) {
  const double q = p - 2.0;
  return {[q](double w) { return w < q ? q / w - 1.0 : 0.0; },
          [q](double w) { return w < q ? -q / (w * w) : 0.0; },
          "positive-part",
          {q}};
}

CompetitorK CompetitorK::tabulated(std::vector<double> w, std::vector<double> k,
                                   std::string description) {
  auto interp = std::make_shared<const MonotoneCubic>(std::move(w), std::move(k));
  return {[interp](double x) { return interp->value(x); },
          [interp](double x) { return interp->derivative(x); }, std::move(description), {}};
}

double delta_functional(const MarginalFn& m, const CompetitorK& comp, double w) {
  check_positive_w(w, "delta_functional");
  const double k = comp.k(w);
  const double dk = comp.dk(w);
  const int p = m.dim();
  return 4.0 * w * m.log_derivative(w) * k + 2.0 * p * k + 4.0 * w * dk + w * k * k;
}

double sure_pseudo_bayes(const MarginalFn& m, const CompetitorK& comp, double w) {
  check_positive_w(w, "sure_pseudo_bayes");
  const int p = m.dim();
  const double h = 2.0 * m.log_derivative(w) + comp.k(w);
  const double dh = 2.0 * m.log_second_derivative(w) + comp.dk(w);
  return p + w * h * h + 2.0 * (p * h + 2.0 * w * dh);
}

DeltaSureCheck delta_sure_consistency(const MarginalFn& m, const CompetitorK& comp,
                                      double lambda, const McConfig& cfg, Execution exec) {
  const CompetitorK none = CompetitorK::zero();
  auto per_draw = [&](std::span<const double> x) -> std::optional<std::array<double, 1>> {
    double w = 0.0;
    for (double v : x) w += v * v;
    if (w == 0.0) return std::nullopt;
    return std::array<double, 1>{sure_pseudo_bayes(m, comp, w) - sure_pseudo_bayes(m, none, w)};
  };
  const auto mc = run_monte_carlo<1>(m.dim(), lambda, cfg, per_draw, exec);

  const ChiSquareLaw law(m.dim(), lambda);
  const quad::Result e = chi_square_expectation(
      law, [&](double w) { return delta_functional(m, comp, w); }, comp.kinks);
  if (!e.converged) throw QuadratureError("delta_sure_consistency: expectation did not converge");
  return {mc.mean[0], mc.std_error[0], e.value, e.error};
}

std::string_view to_string(SideVerdict v) {
  switch (v) {
    case SideVerdict::Divergent:
      return "divergent";
    case SideVerdict::Convergent:
      return "convergent";
    case SideVerdict::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

std::string_view to_string(QaVerdict v) {
  switch (v) {
    case QaVerdict::QuasiAdmissible:
      return "quasi-admissible (numerically indicated)";
    case QaVerdict::NotCertified:
      return "not certified";
    case QaVerdict::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

SideVerdict classify_increments(const std::vector<DecadeIncrement>& inc) {
  const std::size_t n = inc.size();
  if (n < 4) return SideVerdict::Inconclusive;
  const double anchor = inc[n - 4].increment;
  const double last = inc.back().increment;
  auto ratio = [&](std::size_t i) { return inc[i].increment / inc[i - 1].increment; };

  bool grows = anchor > 0.0;
  for (std::size_t i = n - 3; i < n; ++i) grows = grows && inc[i].increment > 0.5 * anchor;
  if (grows && ratio(n - 1) >= 0.99) return SideVerdict::Divergent;

  if (last < 1e-6 * inc.back().cumulative) return SideVerdict::Convergent;
  bool geometric = true;
  for (std::size_t i = n - 3; i < n; ++i) geometric = geometric && ratio(i) <= 0.5;
  if (geometric) return SideVerdict::Convergent;
  return SideVerdict::Inconclusive;
}

ProbeReport divergence_probe(const MarginalFn& m, const ProbeConfig& cfg) {
  if (cfg.decades < 4) throw std::invalid_argument("divergence_probe: need >= 4 decades");
  const double half_p = 0.5 * m.dim();
  // w^{-p/2} / m(w) dw with w = e^t
  auto integrand = [&](double t) { return std::exp((1.0 - half_p) * t - m.log_m(std::exp(t))); };

  auto side = [&](int direction) {
    SideReport report;
    double cumulative = 0.0;
    for (int k = 0; k < cfg.decades; ++k) {
      const double a = direction > 0 ? std::pow(10.0, k) : std::pow(10.0, -(k + 1));
      const double b = direction > 0 ? std::pow(10.0, k + 1) : std::pow(10.0, -k);
      const quad::Result r = quad::integrate(integrand, std::log(a), std::log(b));
      if (!r.converged) {
        throw QuadratureError("divergence_probe: decade [" + format_number(a) + ", " +
                              format_number(b) + "] did not converge");
      }
      cumulative += r.value;
      report.increments.push_back({a, b, r.value, cumulative});
    }
    report.verdict = classify_increments(report.increments);
    return report;
  };

  ProbeReport out;
  out.origin = side(-1);
  out.tail = side(+1);
  const auto o = out.origin.verdict;
  const auto t = out.tail.verdict;
  if (o == SideVerdict::Divergent && t == SideVerdict::Divergent) {
    out.verdict = QaVerdict::QuasiAdmissible;
  } else if (o == SideVerdict::Convergent || t == SideVerdict::Convergent) {
    out.verdict = QaVerdict::NotCertified;
  } else {
    out.verdict = QaVerdict::Inconclusive;
  }
  return out;
}

}  // namespace shrinkage
