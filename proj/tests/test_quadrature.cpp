#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "shrinkage/errors.hpp"
#include "shrinkage/quadrature.hpp"

using namespace shrinkage;

TEST_CASE("smooth integrands") {
  auto r = quad::integrate([](double x) { return std::pow(x, 5); }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(r.panels == 1);

  r = quad::integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0);
  CHECK(r.value == doctest::Approx(std::sqrt(std::numbers::pi) * std::erf(6.0)).epsilon(1e-13));

  r = quad::integrate([](double x) { return std::cos(x); }, 0.0, 40.0);
  CHECK(r.converged);
  CHECK(std::abs(r.value - std::sin(40.0)) < 1e-10);
}

TEST_CASE("endpoint singularities are integrable") {
  // endpoints are never evaluated
  auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(std::abs(r.value - 2.0) < 1e-9);

  r = quad::integrate([](double x) { return std::log(x); }, 0.0, 1.0);
  CHECK(std::abs(r.value + 1.0) < 1e-10);
}

TEST_CASE("pieces split at a kink") {
  auto f = [](double x) { return std::abs(x - 0.3); };
  const std::vector<double> pts{0.0, 0.3, 1.0};
  const auto r = quad::integrate_pieces(f, pts);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-14));
  // two panels, each exact
  CHECK(r.panels == 2);
}

TEST_CASE("error estimate bounds the true error") {
  for (double k : {1.0, 5.0, 25.0}) {
    const auto r = quad::integrate([k](double x) { return std::sin(k * x) * std::exp(-x); }, 0.0, 3.0);
    const double exact =
        (k - std::exp(-3.0) * (std::sin(3.0 * k) + k * std::cos(3.0 * k))) / (1.0 + k * k);
    CHECK(std::abs(r.value - exact) <= r.error + 1e-15);
  }
}

TEST_CASE("panel budget") {
  quad::Tolerance tight;
  tight.abs = 1e-15;
  tight.rel = 1e-15;
  tight.max_panels = 4;
  auto wild = [](double x) { return std::sin(1.0 / x); };
  const auto r = quad::integrate(wild, 1e-4, 1.0, tight);
  CHECK_FALSE(r.converged);
  CHECK(r.panels <= 4);
  CHECK_THROWS_AS(quad::integrate_or_throw(wild, 1e-4, 1.0, tight), QuadratureError);
  CHECK_THROWS_AS(quad::integrate_or_throw(wild, 1e-4, 1.0, tight), NumericFailure);
}

TEST_CASE("reversed and empty intervals") {
  auto f = [](double x) { return x * x; };
  CHECK(quad::integrate(f, 1.0, 0.0).value == doctest::Approx(-1.0 / 3.0));
  CHECK(quad::integrate(f, 2.0, 2.0).value == 0.0);
}
