#include "shrinkage/pchip.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shrinkage {

namespace {

double end_slope(double h0, double h1, double del0, double del1) {
  double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
  if (d * del0 <= 0.0) return 0.0;
  if (del0 * del1 <= 0.0 && std::abs(d) > std::abs(3.0 * del0)) return 3.0 * del0;
  return d;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw std::invalid_argument("MonotoneCubic: need >= 2 knots and matching sizes");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("MonotoneCubic: x must increase");
  }
  std::vector<double> h(n - 1), del(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    del[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(n, 0.0);
  if (n == 2) {
    d_[0] = d_[1] = del[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (del[k - 1] * del[k] > 0.0) {
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      d_[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
    }
  }
  d_[0] = end_slope(h[0], h[1], del[0], del[1]);
  d_[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
}

MonotoneCubic::Local MonotoneCubic::locate(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  k = std::min(k, x_.size() - 2);
  const double h = x_[k + 1] - x_[k];
  return {k, h, (x - x_[k]) / h};
}

double MonotoneCubic::value(double x) const {
  if (x < x_.front()) return y_.front() + d_.front() * (x - x_.front());
  if (x > x_.back()) return y_.back() + d_.back() * (x - x_.back());
  const auto [k, h, t] = locate(x);
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * d_[k] +
         (-2 * t3 + 3 * t2) * y_[k + 1] + (t3 - t2) * h * d_[k + 1];
}

double MonotoneCubic::derivative(double x) const {
  if (x < x_.front()) return d_.front();
  if (x > x_.back()) return d_.back();
  const auto [k, h, t] = locate(x);
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * y_[k] + (-6 * t2 + 6 * t) * y_[k + 1]) / h +
         (3 * t2 - 4 * t + 1) * d_[k] + (3 * t2 - 2 * t) * d_[k + 1];
}

double MonotoneCubic::second_derivative(double x) const {
  if (x < x_.front() || x > x_.back()) return 0.0;
  const auto [k, h, t] = locate(x);
  return ((12 * t - 6) * y_[k] + (-12 * t + 6) * y_[k + 1]) / (h * h) +
         ((6 * t - 4) * d_[k] + (6 * t - 2) * d_[k + 1]) / h;
}

}  // namespace shrinkage
