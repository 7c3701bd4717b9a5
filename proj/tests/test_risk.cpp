#include <omp.h>

#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "shrinkage/errors.hpp"
#include "shrinkage/risk.hpp"

using namespace shrinkage;

TEST_CASE("constant phi: risk = p + c(c - 2(p-2)) E[1/W]") {
  for (int p : {3, 5, 8}) {
    for (double c : {0.0, 1.0, p - 2.0, 1.7 * (p - 2.0)}) {
      for (double lambda : {0.0, 4.0, 25.0}) {
        const double ref = p + c * (c - 2.0 * (p - 2.0)) * oracle::inverse_moment(p, lambda);
        CAPTURE(p);
        CAPTURE(c);
        CAPTURE(lambda);
        CHECK(risk_quadrature(PhiFamily::constant(p, c), lambda).value ==
              doctest::Approx(ref).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("SURE formula") {
  const PhiFamily js = PhiFamily::james_stein(5);
  for (double w : {0.5, 3.0, 40.0}) CHECK(sure_at(js, w) == doctest::Approx(5.0 - 9.0 / w));
  const std::vector<double> x{1.0, 1.0, 0.0, 0.0, 1.0};
  CHECK(sure(js, x) == doctest::Approx(2.0));
  CHECK_THROWS_AS(sure_at(js, 0.0), DomainError);
  CHECK_THROWS_AS(sure(js, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("monte carlo: serial reference equals the parallel kernel") {
  omp_set_num_threads(4);
  McConfig cfg;
  cfg.n_samples = 100'000;
  cfg.seed = 7;
  for (const auto& fam : {PhiFamily::alpha(5, 2.0), PhiFamily::positive_part(3)}) {
    const McRisk a = simulate_risk(fam, 4.0, cfg, Execution::Serial);
    const McRisk b = simulate_risk(fam, 4.0, cfg, Execution::Parallel);
    CHECK(a.risk.value == b.risk.value);
    CHECK(a.risk.std_error == b.risk.std_error);
    CHECK(a.sure.value == b.sure.value);
    CHECK(a.difference_se == b.difference_se);
  }
  omp_set_num_threads(1);
  const McRisk one = simulate_risk(PhiFamily::alpha(5, 2.0), 4.0, cfg, Execution::Parallel);
  omp_set_num_threads(4);
  const McRisk four = simulate_risk(PhiFamily::alpha(5, 2.0), 4.0, cfg, Execution::Parallel);
  CHECK(one.risk.value == four.risk.value);
}

TEST_CASE("monte carlo bookkeeping") {
  McConfig cfg;
  cfg.n_samples = 10'001;
  const McRisk r = simulate_risk(PhiFamily::alpha(5, 2.0), 1.0, cfg);
  CHECK(r.risk.n_samples == 10'000);  // whole antithetic pairs
  CHECK(r.risk.skipped == 0);
  CHECK(r.risk.seed == cfg.seed);
  cfg.seed += 1;
  const McRisk s = simulate_risk(PhiFamily::alpha(5, 2.0), 1.0, cfg);
  CHECK(r.risk.value != s.risk.value);
  cfg.n_samples = 1;
  CHECK_THROWS_AS(simulate_risk(PhiFamily::alpha(5, 2.0), 1.0, cfg), DomainError);
}

TEST_CASE("monte carlo agrees with quadrature") {
  McConfig cfg;
  cfg.n_samples = 400'000;
  for (const auto& fam : {PhiFamily::alpha(5, 2.0), PhiFamily::kuriki_takemura_2(5, 0.3),
                          PhiFamily::li_kuo(8, 0.5)}) {
    for (double lambda : {0.0, 9.0}) {
      const McRisk mc = simulate_risk(fam, lambda, cfg);
      const double q = risk_quadrature(fam, lambda).value;
      CAPTURE(fam.name());
      CAPTURE(lambda);
      CHECK(std::abs(mc.risk.value - q) < 4.0 * mc.risk.std_error);
      CHECK(std::abs(mc.sure.value - q) < 4.0 * mc.sure.std_error);
    }
  }
}

TEST_CASE("risk difference identity") {
  const PhiFamily js = PhiFamily::james_stein(5);
  for (const auto& fam : {PhiFamily::alpha(5, 2.0), PhiFamily::kuriki_takemura_1(5, 0.3),
                          PhiFamily::li_kuo(5, 0.3)}) {
    for (double lambda : {0.0, 9.0}) {
      const double direct = risk_quadrature(js, lambda).value - risk_quadrature(fam, lambda).value;
      CAPTURE(fam.name());
      CAPTURE(lambda);
      CHECK(oracle::near(kubokawa_risk_diff(fam, lambda), direct, 1e-7, 1e-9));
    }
  }
  CHECK(kubokawa_risk_diff(js, 3.0) == 0.0);
  CHECK_THROWS_AS(kubokawa_risk_diff(PhiFamily::identity(5), 0.0), UnsupportedFamily);
  CHECK_THROWS_AS(risk_diff_at_origin(PhiFamily::constant(5, 2.0)), UnsupportedFamily);
}

TEST_CASE("origin gain grows with alpha") {
  CHECK(std::abs(risk_diff_at_origin(PhiFamily::alpha(5, 1.0))) < 1e-9);
  double prev = 0.0;
  for (double alpha : {1.5, 2.0, 5.0, 20.0, 200.0}) {
    const double g = risk_diff_at_origin(PhiFamily::alpha(5, alpha));
    CHECK(g > prev);
    prev = g;
  }
  // PP is the alpha -> infinity end
  CHECK(risk_diff_at_origin(PhiFamily::positive_part(5)) > prev);
  // same number via the full identity at lambda = 0
  const PhiFamily a5 = PhiFamily::alpha(5, 5.0);
  CHECK(risk_diff_at_origin(a5) == doctest::Approx(kubokawa_risk_diff(a5, 0.0)).epsilon(1e-8));
}

TEST_CASE("kubokawa phi through the chi-square density") {
  const PhiFamily k = PhiFamily::kubokawa(5);
  CHECK(kubokawa_phi0(5, 0.0) == 0.0);
  for (double w : {0.01, 1.0, 7.0, 60.0}) {
    CHECK(kubokawa_phi0(5, w) == doctest::Approx(phi(k, w)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(kubokawa_phi0(5, -1.0), DomainError);
}

TEST_CASE("js limit detection") {
  CHECK(has_js_limit(PhiFamily::alpha(5, 1.0)));
  CHECK(has_js_limit(PhiFamily::positive_part(5)));
  CHECK(has_js_limit(PhiFamily::li_kuo(5, 0.2)));
  CHECK_FALSE(has_js_limit(PhiFamily::identity(5)));
  CHECK_FALSE(has_js_limit(PhiFamily::constant(5, 2.5)));
}
