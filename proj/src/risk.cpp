#include "shrinkage/risk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shrinkage/errors.hpp"

namespace shrinkage {

namespace {

void require_js_limit(const PhiFamily& fam) {
  if (!has_js_limit(fam)) {
    throw UnsupportedFamily(fam.name() +
                            ": phi(w) does not approach p-2, the "
                            "risk-difference identity does not apply");
  }
}

// Knots in u = sqrt(w) for [0, hi], including interior kinks.
std::vector<double> sqrt_knots(double hi, std::span<const double> kinks) {
  std::vector<double> pts{0.0};
  for (double k : kinks) {
    if (k > 0.0 && k < hi) pts.push_back(std::sqrt(k));
  }
  pts.push_back(std::sqrt(hi));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// int_0^inf g(w) dw as int over u = sqrt(w) on [0, sqrt(B)] plus the tail
// [B, inf) mapped to t = B / w in (0, 1].
quad::Result integrate_half_line(const std::function<double(double)>& g, double B,
                                 std::span<const double> kinks, const quad::Tolerance& tol) {
  const auto pts = sqrt_knots(B, kinks);
  quad::Result head = quad::integrate_pieces(
      [&](double u) { return 2.0 * u * g(u * u); }, pts, tol);
  std::vector<double> tail_pts{0.0};
  for (double k : kinks) {
    if (k > B) tail_pts.push_back(B / k);
  }
  tail_pts.push_back(1.0);
  std::sort(tail_pts.begin(), tail_pts.end());
  quad::Result tail = quad::integrate_pieces(
      [&](double t) {
        const double w = B / t;
        return g(w) * B / (t * t);
      },
      tail_pts, tol);
  head.value += tail.value;
  head.error += tail.error;
  head.panels += tail.panels;
  head.converged = head.converged && tail.converged;
  return head;
}

// G_p(w; lambda), memoized on the outer rule's nodes.
class GCache {
 public:
  explicit GCache(const ChiSquareLaw& law) : law_(law) {}
  double operator()(double w) {
    auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
    const double g = g_weight(law_, w);
    memo_.emplace(w, g);
    return g;
  }

 private:
  const ChiSquareLaw& law_;
  std::map<double, double> memo_;
};

double outer_bound(const PhiFamily& fam, const ChiSquareLaw& law) {
  double b = law.upper_cutoff();
  for (double k : fam.kinks()) b = std::max(b, 2.0 * k);
  return b;
}

}  // namespace

std::string_view to_string(RiskMethod m) {
  switch (m) {
    case RiskMethod::MonteCarlo:
      return "monte-carlo";
    case RiskMethod::Sure:
      return "sure";
    case RiskMethod::Quadrature:
      return "quadrature";
    case RiskMethod::KubokawaDiff:
      return "kubokawa-diff";
  }
  return "unknown";
}

double sure_at(const PhiFamily& fam, double w) {
  if (!(w > 0.0)) throw DomainError("sure: undefined at |x|^2 = 0");
  const PhiValue v = fam.evaluate(w);
  const int p = fam.dim();
  return p - v.ratio * (2.0 * (p - 2.0) - v.phi) - 4.0 * v.phi_prime;
}

double sure(const PhiFamily& fam, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(fam.dim())) {
    throw std::invalid_argument("sure: vector length does not match p");
  }
  double w = 0.0;
  for (double v : x) w += v * v;
  return sure_at(fam, w);
}

McRisk simulate_risk(const PhiFamily& fam, double lambda, const McConfig& cfg, Execution exec) {
  const int p = fam.dim();
  const double shift = std::sqrt(lambda);
  auto per_draw = [&](std::span<const double> x) -> std::optional<std::array<double, 3>> {
    double w = 0.0;
    for (double v : x) w += v * v;
    if (w == 0.0) return std::nullopt;
    const PhiValue v = fam.evaluate(w);
    const double factor = 1.0 - v.ratio;
    double loss = 0.0;
    for (int i = 0; i < p; ++i) {
      const double d = factor * x[i] - (i == 0 ? shift : 0.0);
      loss += d * d;
    }
    const double s = p - v.ratio * (2.0 * (p - 2.0) - v.phi) - 4.0 * v.phi_prime;
    return std::array<double, 3>{loss, s, loss - s};
  };
  const auto summary = run_monte_carlo<3>(p, lambda, cfg, per_draw, exec);

  McRisk out{
      RiskPoint{lambda, fam, summary.mean[0], RiskMethod::MonteCarlo, summary.std_error[0], 0.0,
                summary.draws, cfg.seed, summary.skipped},
      RiskPoint{lambda, fam, summary.mean[1], RiskMethod::Sure, summary.std_error[1], 0.0,
                summary.draws, cfg.seed, summary.skipped},
      summary.std_error[2]};
  return out;
}

RiskPoint risk_mc(const PhiFamily& fam, double lambda, const McConfig& cfg, Execution exec) {
  return simulate_risk(fam, lambda, cfg, exec).risk;
}

quad::Result chi_square_expectation(const ChiSquareLaw& law, const std::function<double(double)>& h,
                                    std::span<const double> kinks, const quad::Tolerance& tol) {
  const auto pts = sqrt_knots(law.upper_cutoff(), kinks);
  return quad::integrate_pieces(
      [&](double u) {
        const double w = u * u;
        const double f = density(law, w);
        if (f == 0.0) return 0.0;
        return 2.0 * u * f * h(w);
      },
      pts, tol);
}

RiskPoint risk_quadrature(const PhiFamily& fam, double lambda) {
  const ChiSquareLaw law(fam.dim(), lambda);
  const double q = fam.dim() - 2.0;
  const auto kinks = fam.kinks();
  const quad::Result r = chi_square_expectation(
      law,
      [&](double w) {
        const PhiValue v = fam.evaluate(w);
        return v.ratio * (2.0 * q - v.phi) + 4.0 * v.phi_prime;
      },
      kinks);
  if (!r.converged) {
    throw QuadratureError("risk_quadrature(" + fam.name() + ", lambda=" + std::to_string(lambda) +
                          "): error estimate " + std::to_string(r.error) + " above tolerance");
  }
  return RiskPoint{lambda, fam, fam.dim() - r.value, RiskMethod::Quadrature, 0.0, r.error};
}

bool has_js_limit(const PhiFamily& fam) {
  return fam.limit_at_infinity() == fam.dim() - 2.0;
}

double kubokawa_risk_diff(const PhiFamily& fam, double lambda) {
  require_js_limit(fam);
  const ChiSquareLaw law(fam.dim(), lambda);
  const double q = fam.dim() - 2.0;
  GCache g(law);
  auto integrand = [&](double w) {
    const PhiValue v = fam.evaluate(w);
    if (v.phi_prime == 0.0) return 0.0;
    return 2.0 * v.phi_prime * ((v.phi - q) * g(w) + 2.0 * density(law, w));
  };
  const auto kinks = fam.kinks();
  const quad::Result r = integrate_half_line(integrand, outer_bound(fam, law), kinks, {});
  if (!r.converged) {
    throw QuadratureError("kubokawa_risk_diff(" + fam.name() + "): outer quadrature did not converge");
  }
  return r.value;
}

double risk_diff_at_origin(const PhiFamily& fam) {
  require_js_limit(fam);
  const ChiSquareLaw law(fam.dim(), 0.0);
  const PhiFamily kubokawa = PhiFamily::kubokawa(fam.dim());
  GCache g(law);
  auto integrand = [&](double w) {
    const PhiValue v = fam.evaluate(w);
    if (v.phi_prime == 0.0) return 0.0;
    const double gap = v.phi - phi(kubokawa, w);
    if (gap == 0.0) return 0.0;
    return 2.0 * v.phi_prime * gap * g(w);
  };
  const auto kinks = fam.kinks();
  const quad::Result r = integrate_half_line(integrand, outer_bound(fam, law), kinks, {});
  if (!r.converged) {
    throw QuadratureError("risk_diff_at_origin(" + fam.name() + "): quadrature did not converge");
  }
  return r.value;
}

double kubokawa_phi0(int p, double w) {
  if (!(w >= 0.0)) throw DomainError("kubokawa_phi0: w must be >= 0");
  if (w == 0.0) return 0.0;
  const ChiSquareLaw law(p, 0.0);
  return p - 2.0 - 2.0 * density(law, w) / g_weight(law, w);
}

}  // namespace shrinkage
