#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "shrinkage/errors.hpp"
#include "shrinkage/quadrature.hpp"
#include "shrinkage/special_functions.hpp"

using namespace shrinkage;

TEST_CASE("noncentral density against a directly summed mixture") {
  for (int p : {1, 3, 5, 8, 20}) {
    for (double lambda : {0.0, 0.5, 4.0, 25.0, 100.0}) {
      const ChiSquareLaw law(p, lambda);
      for (double y : {1e-3, 0.1, 1.0, 4.5, 20.0, 80.0, 200.0}) {
        const double ref = oracle::ncx2_pdf(p, lambda, y);
        CAPTURE(p);
        CAPTURE(lambda);
        CAPTURE(y);
        CHECK(density(law, y) == doctest::Approx(ref).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("density is a probability density") {
  for (int p : {3, 5, 8}) {
    for (double lambda : {0.0, 4.0, 25.0}) {
      const ChiSquareLaw law(p, lambda);
      const double hi = law.upper_cutoff();
      const auto r = quad::integrate([&](double u) { return 2.0 * u * density(law, u * u); }, 0.0,
                                     std::sqrt(hi));
      CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
      // mean p + lambda
      const auto m = quad::integrate(
          [&](double u) { return 2.0 * u * u * u * density(law, u * u); }, 0.0, std::sqrt(hi));
      CHECK(m.value == doctest::Approx(p + lambda).epsilon(1e-9));
    }
  }
}

TEST_CASE("survival function") {
  const ChiSquareLaw law(5, 4.0);
  double prev = 1.0;
  for (double w : {0.0, 0.5, 1.0, 3.0, 9.0, 30.0, 90.0}) {
    const double s = survival(law, w);
    CHECK(s <= prev);
    prev = s;
    const double cdf = quad::integrate([&](double y) { return density(law, y); }, 0.0, w).value;
    CHECK(s + cdf == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(survival(law, 0.0) == 1.0);
  const double c = law.upper_cutoff();
  CHECK(survival(law, c) <= 1e-12);
  CHECK(survival(law, 0.99 * c) > 1e-12);
  CHECK(survival_cutoff(law, 1e-12) == doctest::Approx(c));
}

TEST_CASE("central density special cases") {
  CHECK(central_density(2.0, 0.0) == doctest::Approx(0.5));
  CHECK(central_density(4.0, 0.0) == 0.0);
  CHECK(central_density(2.0, 3.0) == doctest::Approx(0.5 * std::exp(-1.5)).epsilon(1e-15));
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-15));
}

TEST_CASE("G weight against a 1e6-panel Riemann sum") {
  const ChiSquareLaw law(3, 4.0);
  CHECK(std::abs(g_weight(law, 10.0) - oracle::g_midpoint(3, 4.0, 10.0)) < 1e-6);
}

TEST_CASE("G weight against the incomplete gamma series") {
  for (int p : {3, 4, 5, 8, 12}) {
    for (double lambda : {0.0, 1.0, 9.0, 25.0}) {
      const ChiSquareLaw law(p, lambda);
      for (double w : {0.01, 0.1, 1.0, 3.0, 10.0, 50.0, 400.0, 1e4}) {
        CAPTURE(p);
        CAPTURE(lambda);
        CAPTURE(w);
        CHECK(g_weight(law, w) == doctest::Approx(oracle::g_closed_form(p, lambda, w)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("G weight shape") {
  const ChiSquareLaw law(5, 9.0);
  CHECK(g_weight(law, 0.0) == 0.0);
  double prev = 0.0;
  for (double w = 0.25; w < 200.0; w *= 1.5) {
    const double g = g_weight(law, w);
    CHECK(g >= prev);
    prev = g;
  }
  // limit E[1/W]
  CHECK(g_weight(law, 1e6) == doctest::Approx(oracle::inverse_moment(5, 9.0)).epsilon(1e-9));
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(ChiSquareLaw(0, 1.0), DomainError);
  CHECK_THROWS_AS(ChiSquareLaw(3, -1.0), DomainError);
  CHECK_THROWS_AS(ChiSquareLaw(3, std::nan("")), DomainError);
  const ChiSquareLaw two(2, 0.0);
  CHECK_THROWS_AS(g_weight(two, 1.0), DomainError);
  const ChiSquareLaw law(5, 0.0);
  CHECK_THROWS_AS(g_weight(law, -1.0), DomainError);
}
