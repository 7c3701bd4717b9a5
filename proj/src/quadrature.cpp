#include "shrinkage/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "shrinkage/errors.hpp"

namespace shrinkage::quad {

namespace {

// QUADPACK qk15 nodes and weights. Odd-indexed nodes are the 7-point Gauss
// nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel rule15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = kKronrod[7] * fc;
  double gauss = kGauss[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kNodes[j];
    const double sum = f(c - dx) + f(c + dx);
    kronrod += kKronrod[j] * sum;
    if (j % 2 == 1) gauss += kGauss[j / 2] * sum;
  }
  kronrod *= h;
  gauss *= h;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Tolerance& tol) {
  if (a == b) return {0.0, 0.0, 0, true};
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw DomainError("integrate: interval endpoints must be finite");
  }

  std::priority_queue<Panel> open;
  std::vector<Panel> frozen;  // too narrow to split further
  open.push(rule15(f, a, b));
  double total = open.top().value;
  double err = open.top().error;
  std::size_t panels = 1;

  auto target = [&] { return std::max(tol.abs, tol.rel * std::abs(total)); };

  while (!open.empty() && err > target() && panels < tol.max_panels) {
    if (!std::isfinite(total)) break;
    Panel worst = open.top();
    open.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      frozen.push_back(worst);
      continue;
    }
    Panel left = rule15(f, worst.a, mid);
    Panel right = rule15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    open.push(left);
    open.push(right);
    ++panels;
  }

  // Re-sum from scratch so incremental drift does not leak into the result.
  Result out;
  out.panels = panels;
  for (const auto& p : frozen) {
    out.value += p.value;
    out.error += p.error;
  }
  while (!open.empty()) {
    out.value += open.top().value;
    out.error += open.top().error;
    open.pop();
  }
  out.converged = std::isfinite(out.value) &&
                  out.error <= std::max(tol.abs, tol.rel * std::abs(out.value));
  return out;
}

Result integrate_pieces(const Integrand& f, std::span<const double> pts,
                        const Tolerance& tol) {
  Result out;
  out.converged = true;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Result piece = integrate(f, pts[i], pts[i + 1], tol);
    out.value += piece.value;
    out.error += piece.error;
    out.panels += piece.panels;
    out.converged = out.converged && piece.converged;
  }
  return out;
}

double integrate_or_throw(const Integrand& f, double a, double b, const Tolerance& tol,
                          const char* what) {
  const Result r = integrate(f, a, b, tol);
  if (!r.converged) {
    throw QuadratureError(std::string(what) + ": quadrature did not converge on [" +
                          std::to_string(a) + ", " + std::to_string(b) +
                          "], value=" + std::to_string(r.value) +
                          " error=" + std::to_string(r.error) +
                          " panels=" + std::to_string(r.panels));
  }
  return r.value;
}

}  // namespace shrinkage::quad
