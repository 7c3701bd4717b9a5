#include "shrinkage/estimators.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "shrinkage/errors.hpp"
#include "shrinkage/special_functions.hpp"

namespace shrinkage {

namespace {

// Saturated regime threshold: log of the bound on Q(a, z) below which the
// incomplete-gamma remainder is invisible in double precision.
constexpr double kLogRemainderCutoff = -37.0;

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

void check_w(double w) {
  if (!(w >= 0.0)) throw DomainError("phi: w must be >= 0, got " + std::to_string(w));
}

}  // namespace

PsiSeries::PsiSeries(int p, double alpha, double truncation_tol, std::size_t max_terms)
    : p_(p), alpha_(alpha), shape_(0.0), tol_(truncation_tol), max_terms_(max_terms),
      lgamma_a_(0.0) {
  if (p < 3) throw DomainError("psi series: p must be >= 3, got " + std::to_string(p));
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw DomainError("psi series: alpha must be finite and >= 1, got " + std::to_string(alpha));
  }
  if (!(truncation_tol > 0.0)) throw DomainError("psi series: truncation_tol must be > 0");
  if (max_terms < 1) throw DomainError("psi series: max_terms must be >= 1");
  shape_ = alpha * (0.5 * p - 1.0);
  lgamma_a_ = log_gamma(shape_);

  const double wanted = shape_ + 20.0 * std::sqrt(shape_) + 512.0;
  const auto n = static_cast<std::size_t>(std::min<double>(wanted, double(max_terms) + 2.0));
  auto table = std::make_shared<std::vector<double>>(n);
  for (std::size_t j = 0; j < n; ++j) (*table)[j] = 1.0 / (p - 2.0 + 2.0 * double(j) / alpha);
  ratios_ = std::move(table);
}

double PsiSeries::coefficient_ratio(std::size_t j) const {
  if (j < ratios_->size()) return (*ratios_)[j];
  return 1.0 / (p_ - 2.0 + 2.0 * double(j) / alpha_);
}

PsiValue evaluate_psi(const PsiSeries& series, double w) {
  if (!(w >= 0.0)) throw DomainError("psi: w must be >= 0, got " + std::to_string(w));
  const double a = series.shape();
  const double z = 0.5 * series.alpha() * w;
  const double q = series.dim() - 2.0;
  PsiValue out;

  if (z > a + 1.0) {
    // psi = Gamma(a+1) e^z z^{-a} P(a, z) / (p-2); Q = 1 - P is bounded by
    // z^{a-1} e^{-z} / (Gamma(a) (1 - (a-1)/z)).
    const double log_z = std::log(z);
    double log_q = (a - 1.0) * log_z - z - series.log_gamma_shape();
    if (a > 1.0) log_q -= std::log1p(-(a - 1.0) / z);
    if (log_q < kLogRemainderCutoff) {
      out.saturated = true;
      out.log_psi_minus_z = log_gamma(a + 1.0) - a * log_z - std::log(q);
      out.log_psi = z + out.log_psi_minus_z;
      out.psi = std::exp(out.log_psi);
      const double dlog = 0.5 * series.alpha() * (1.0 - a / z);
      out.dpsi = std::exp(out.log_psi + std::log(dlog));
      out.tail_over_w = std::exp(out.log_psi - std::log(w));
      return out;
    }
  }

  const double tol = series.truncation_tol();
  const double c0 = series.coefficient_ratio(0);
  double s = c0 * series.coefficient_ratio(1);  // s_k = c_{k+1} w^k
  double tail = s;                               // sum_k s_k
  double deriv = s;                              // sum_k (k+1) s_k
  std::size_t terms = 2;
  for (std::size_t k = 0;; ++k) {
    const double ratio = w * series.coefficient_ratio(k + 2);
    if (ratio < 1.0) {
      const double kd = static_cast<double>(k);
      const double ratio_d = ratio * (kd + 2.0) / (kd + 1.0);
      const double rest = s * ratio / (1.0 - ratio);
      const double rest_d =
          ratio_d < 1.0 ? (kd + 1.0) * s * ratio_d / (1.0 - ratio_d)
                        : std::numeric_limits<double>::infinity();
      if (rest <= tol * tail && rest_d <= tol * deriv) break;
    }
    if (terms >= series.max_terms()) {
      throw TruncationError("psi: series did not reach tolerance within " +
                            std::to_string(terms) + " terms (w=" + std::to_string(w) +
                            ", alpha=" + std::to_string(series.alpha()) + ")");
    }
    s *= ratio;
    tail += s;
    deriv += (static_cast<double>(k) + 2.0) * s;
    ++terms;
  }
  out.terms = terms;
  out.tail_over_w = tail;
  out.psi = c0 + w * tail;
  out.dpsi = deriv;
  out.log_psi = std::log(out.psi);
  out.log_psi_minus_z = out.log_psi - z;
  return out;
}

double psi(const PsiSeries& series, double w) { return evaluate_psi(series, w).psi; }
double log_psi(const PsiSeries& series, double w) { return evaluate_psi(series, w).log_psi; }

double li_kuo_coefficient(int p, double b1) {
  if (p < 3) throw DomainError("li_kuo_coefficient: p must be >= 3");
  if (!(b1 > 0.0 && b1 < 0.25 * (p - 2.0))) {
    throw DomainError("li_kuo_coefficient: b1 must lie in (0, (p-2)/4), got " +
                      std::to_string(b1));
  }
  const double log_a = std::log(2.0 * b1) + b1 * std::numbers::ln2 +
                       log_gamma(0.5 * p - b1 - 1.0) - log_gamma(0.5 * p - 2.0 * b1 - 1.0);
  return std::exp(log_a);
}

PhiFamily::PhiFamily(int p, FamilySpec spec) : p_(p), spec_(spec) {
  if (p < 3) throw DomainError("phi family: p must be >= 3, got " + std::to_string(p));
  std::visit(overloaded{
                 [](const family::Constant& f) {
                   if (!std::isfinite(f.c)) throw DomainError("constant: c must be finite");
                 },
                 [](const family::PositivePart&) {},
                 [&](const family::Alpha& f) {
                   series_ = std::make_shared<const PsiSeries>(p, f.alpha);
                 },
                 [&](const family::LiKuo1& f) { li_kuo_a_ = li_kuo_coefficient(p, f.b1); },
                 [](const family::KurikiTakemura1& f) {
                   if (!(f.r > 0.0) || !std::isfinite(f.r)) {
                     throw DomainError("kuriki-takemura: r must be > 0");
                   }
                 },
                 [](const family::KurikiTakemura2& f) {
                   if (!(f.r > 0.0) || !std::isfinite(f.r)) {
                     throw DomainError("kuriki-takemura: r must be > 0");
                   }
                 },
             },
             spec_);
}

std::string PhiFamily::name() const {
  const int p = p_;
  return std::visit(overloaded{
                        [p](const family::Constant& f) -> std::string {
                          if (f.c == 0.0) return "identity";
                          if (f.c == p - 2.0) return "js";
                          return "const:" + format_number(f.c);
                        },
                        [](const family::PositivePart&) -> std::string { return "pp"; },
                        [](const family::Alpha& f) { return "alpha:" + format_number(f.alpha); },
                        [](const family::LiKuo1& f) { return "likuo:" + format_number(f.b1); },
                        [](const family::KurikiTakemura1& f) {
                          return "kt1:" + format_number(f.r);
                        },
                        [](const family::KurikiTakemura2& f) {
                          return "kt2:" + format_number(f.r);
                        },
                    },
                    spec_);
}

bool PhiFamily::in_dominating_range() const {
  if (const auto* c = std::get_if<family::Constant>(&spec_)) {
    return c->c > 0.0 && c->c < 2.0 * (p_ - 2.0);
  }
  return true;
}

double PhiFamily::limit_at_infinity() const {
  if (const auto* c = std::get_if<family::Constant>(&spec_)) return c->c;
  return p_ - 2.0;
}

bool PhiFamily::bounded_at_origin() const {
  if (const auto* c = std::get_if<family::Constant>(&spec_)) return c->c == 0.0;
  return !std::holds_alternative<family::LiKuo1>(spec_);
}

std::vector<double> PhiFamily::kinks() const {
  const double q = p_ - 2.0;
  return std::visit(
      overloaded{
          [](const family::Constant&) { return std::vector<double>{}; },
          [q](const family::PositivePart&) { return std::vector<double>{q}; },
          [](const family::Alpha&) { return std::vector<double>{}; },
          [](const family::LiKuo1&) { return std::vector<double>{}; },
          [](const family::KurikiTakemura1& f) { return std::vector<double>{f.r * f.r}; },
          [q](const family::KurikiTakemura2& f) {
            const double s = (q + 1.0) / q * f.r;
            return std::vector<double>{s * s};
          },
      },
      spec_);
}

PhiValue PhiFamily::evaluate(double w) const {
  check_w(w);
  const double q = p_ - 2.0;
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      overloaded{
          [&](const family::Constant& f) -> PhiValue {
            if (w > 0.0) return {f.c, 0.0, f.c / w};
            return {f.c, 0.0, f.c == 0.0 ? 0.0 : std::copysign(inf, f.c)};
          },
          [&](const family::PositivePart&) -> PhiValue {
            if (w < q) return {w, 1.0, 1.0};
            return {q, 0.0, q / w};
          },
          [&](const family::Alpha&) -> PhiValue {
            // phi = p-2 - 1/psi = (p-2)(psi - psi(0))/psi, phi' = psi'/psi^2
            const PsiValue v = evaluate_psi(*series_, w);
            PhiValue out;
            if (v.saturated) {
              const double inv_psi = std::exp(-v.log_psi);
              const double z = 0.5 * series_->alpha() * w;
              out.phi = q - inv_psi;
              out.ratio = out.phi / w;
              out.phi_prime = 0.5 * series_->alpha() * (1.0 - series_->shape() / z) * inv_psi;
            } else {
              out.ratio = q * v.tail_over_w / v.psi;
              out.phi = out.ratio * w;
              out.phi_prime = v.dpsi / (v.psi * v.psi);
            }
            return out;
          },
          [&](const family::LiKuo1& f) -> PhiValue {
            if (w == 0.0) return {-inf, inf, -inf};
            const double tail = li_kuo_a_ * std::pow(w, -f.b1);
            const double value = q - tail;
            return {value, f.b1 * tail / w, value / w};
          },
          [&](const family::KurikiTakemura1& f) -> PhiValue {
            const double r2 = f.r * f.r;
            if (w < r2) return {0.0, 0.0, 0.0};
            const double x = f.r / std::sqrt(w);
            double sum = 0.0;
            double slope = 0.0;
            double pw = 1.0;
            for (int i = 1; i <= p_ - 2; ++i) {
              pw *= x;
              sum += pw;
              slope += 0.5 * i * pw;
            }
            const double value = w == r2 ? 0.0 : q - sum;
            return {value, slope / w, value / w};
          },
          [&](const family::KurikiTakemura2& f) -> PhiValue {
            const double s = (q + 1.0) / q * f.r;
            if (w < s * s) return {0.0, 0.0, 0.0};
            const double sw = std::sqrt(w);
            const double gap = sw - f.r;
            const double value = w == s * s ? 0.0 : q - f.r / gap;
            return {value, f.r / (gap * gap) / (2.0 * sw), value / w};
          },
      },
      spec_);
}

double phi(const PhiFamily& fam, double w) { return fam.evaluate(w).phi; }
double phi_prime(const PhiFamily& fam, double w) { return fam.evaluate(w).phi_prime; }

std::vector<double> apply(const PhiFamily& fam, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(fam.dim())) {
    throw std::invalid_argument("apply: vector length " + std::to_string(x.size()) +
                                " does not match p=" + std::to_string(fam.dim()));
  }
  double w = 0.0;
  for (double v : x) w += v * v;
  std::vector<double> out(x.size(), 0.0);
  if (w == 0.0) {
    if (!fam.bounded_at_origin()) {
      throw DomainError("apply: shrinkage factor of " + fam.name() + " is unbounded at x = 0");
    }
    return out;
  }
  const double factor = 1.0 - fam.evaluate(w).ratio;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = factor * x[i];
  return out;
}

std::vector<PhiValue> evaluate_grid(const PhiFamily& fam, std::span<const double> w,
                                    Execution exec) {
  std::vector<PhiValue> out(w.size());
  const auto n = static_cast<long long>(w.size());
  if (exec == Execution::Serial) {
    for (long long i = 0; i < n; ++i) out[i] = fam.evaluate(w[i]);
    return out;
  }
  // Exceptions must not leave the parallel region; keep the lowest index.
  long long failed_at = n;
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = fam.evaluate(w[i]);
    } catch (...) {
#pragma omp critical(shrinkage_evaluate_grid)
      if (i < failed_at) {
        failed_at = i;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace shrinkage
