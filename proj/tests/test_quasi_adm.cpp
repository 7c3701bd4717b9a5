#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "shrinkage/errors.hpp"
#include "shrinkage/quasi_adm.hpp"
#include "shrinkage/risk.hpp"

using namespace shrinkage;

namespace {

std::vector<DecadeIncrement> increments(const std::vector<double>& v) {
  std::vector<DecadeIncrement> out;
  double total = 0.0;
  double lo = 1.0;
  for (double x : v) {
    total += x;
    out.push_back({lo, 10 * lo, x, total});
    lo *= 10;
  }
  return out;
}

}  // namespace

TEST_CASE("delta functional: JS marginal, positive-part competitor") {
  const MarginalFn m = MarginalFn::james_stein(5);
  const CompetitorK k = CompetitorK::positive_part(5);
  CHECK(delta_functional(m, k, 1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(delta_functional(m, k, 0.5) == doctest::Approx(8.5).epsilon(1e-14));
  CHECK(delta_functional(m, k, 2.0) == doctest::Approx(-3.5).epsilon(1e-14));
  // k vanishes past p-2
  CHECK(delta_functional(m, k, 3.5) == 0.0);
  CHECK(delta_functional(m, CompetitorK::zero(), 0.7) == 0.0);
  CHECK_THROWS_AS(delta_functional(m, k, 0.0), DomainError);
}

TEST_CASE("delta functional is the SURE difference pointwise") {
  for (const auto& m : {MarginalFn::james_stein(5), MarginalFn::alpha(5, 2.0), MarginalFn::power_law(6, -0.5)}) {
    const CompetitorK k = CompetitorK::positive_part(m.dim());
    for (double w : {0.2, 0.9, 1.7, 2.6, 5.0}) {
      const double diff = sure_pseudo_bayes(m, k, w) - sure_pseudo_bayes(m, CompetitorK::zero(), w);
      CHECK(oracle::near(diff, delta_functional(m, k, w), 1e-11, 1e-11));
    }
  }
}

TEST_CASE("pseudo-Bayes SURE equals the phi-family SURE") {
  for (const auto& m : {MarginalFn::james_stein(5), MarginalFn::alpha(5, 1.0), MarginalFn::alpha(8, 5.0),
                        MarginalFn::flat(4)}) {
    const auto fam = m.associated_family();
    REQUIRE(fam);
    for (double w : {0.1, 1.0, 4.0, 30.0}) {
      CHECK(sure_pseudo_bayes(m, CompetitorK::zero(), w) ==
            doctest::Approx(sure_at(*fam, w)).epsilon(1e-10));
    }
  }
}

TEST_CASE("log m derivatives against finite differences") {
  for (const auto& m : {MarginalFn::alpha(5, 1.0), MarginalFn::alpha(3, 2.0), MarginalFn::alpha(8, 20.0),
                        MarginalFn::power_law(5, 0.7)}) {
    for (double w : {0.05, 0.8, 3.0, 25.0}) {
      const double h = 1e-5 * w;
      const double d1 = (m.log_m(w + h) - m.log_m(w - h)) / (2 * h);
      const double d2 = (m.log_derivative(w + h) - m.log_derivative(w - h)) / (2 * h);
      CAPTURE(m.name());
      CAPTURE(w);
      CHECK(log_m_derivative(m, w) == doctest::Approx(d1).epsilon(1e-7));
      CHECK(m.log_second_derivative(w) == doctest::Approx(d2).epsilon(1e-6));
    }
  }
}

TEST_CASE("alpha marginal at alpha = 1 is a plain integral") {
  const MarginalFn m = MarginalFn::alpha(5, 1.0);
  for (double w : {0.5, 2.0, 10.0}) {
    // t = s^2
    const double integral = oracle::simpson([w](double s) { return 2 * s * s * std::exp(-0.5 * w * s * s); },
                                            0.0, 1.0, 20000);
    CHECK(m.log_m(w) == doctest::Approx(std::log(integral)).epsilon(1e-12));
  }
}

TEST_CASE("tabulated marginal follows a power law") {
  std::vector<double> w, lm;
  for (double x = 0.1; x < 200.0; x *= 1.3) {
    w.push_back(x);
    lm.push_back(-1.5 * std::log(x));
  }
  const MarginalFn m = MarginalFn::tabulated(5, w, lm);
  CHECK(m.name() == "table");
  for (double x : {0.3, 2.0, 50.0, 1000.0}) CHECK(m.log_derivative(x) == doctest::Approx(-1.5 / x).epsilon(1e-10));
  CHECK_THROWS_AS(MarginalFn::tabulated(5, {1.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(MarginalFn::tabulated(5, {0.0, 1.0}, {0.0, 0.0}), DomainError);
}

TEST_CASE("increment classifier") {
  CHECK(classify_increments(increments({1, 1, 1, 1, 1, 1})) == SideVerdict::Divergent);
  // growing increments (power divergence)
  CHECK(classify_increments(increments({1, 3, 9, 27, 81})) == SideVerdict::Divergent);
  // a large first decade before the steady state
  CHECK(classify_increments(increments({1.86, 0.92, 0.9186, 0.9186, 0.9186, 0.9186})) == SideVerdict::Divergent);
  CHECK(classify_increments(increments({1, 0.1, 0.01, 1e-3, 1e-4, 1e-5})) == SideVerdict::Convergent);
  CHECK(classify_increments(increments({1, 1, 1, 1, 1, 1e-9})) == SideVerdict::Convergent);
  // slow decay is neither
  CHECK(classify_increments(increments({1, 0.9, 0.81, 0.729, 0.66, 0.59})) == SideVerdict::Inconclusive);
  CHECK(classify_increments(increments({1, 1, 1})) == SideVerdict::Inconclusive);
}

TEST_CASE("probe increments match the power-law antiderivative") {
  for (int p : {3, 5, 8}) {
    for (double e : {0.0, 1.0 - 0.5 * p, 0.5}) {
      const MarginalFn m = MarginalFn::power_law(p, e);
      const ProbeReport r = divergence_probe(m);
      const double s = 1.0 - 0.5 * p - e;  // integrand w^{s-1}
      for (const auto* side : {&r.origin, &r.tail}) {
        for (const auto& inc : side->increments) {
          const double exact = s == 0.0 ? std::log(inc.hi / inc.lo)
                                         : (std::pow(inc.hi, s) - std::pow(inc.lo, s)) / s;
          CHECK(inc.increment == doctest::Approx(exact).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("probe verdicts") {
  for (int p : {3, 5, 8}) {
    const ProbeReport js = divergence_probe(MarginalFn::james_stein(p));
    CHECK(js.origin.verdict == SideVerdict::Divergent);
    CHECK(js.tail.verdict == SideVerdict::Divergent);
    CHECK(js.verdict == QaVerdict::QuasiAdmissible);

    const ProbeReport flat = divergence_probe(MarginalFn::flat(p));
    CHECK(flat.tail.verdict == SideVerdict::Convergent);
    CHECK(flat.verdict == QaVerdict::NotCertified);

    for (double alpha : {1.0, 2.0, 5.0}) {
      const ProbeReport a = divergence_probe(MarginalFn::alpha(p, alpha));
      CAPTURE(p);
      CAPTURE(alpha);
      CHECK(a.origin.verdict == SideVerdict::Divergent);
      CHECK(a.tail.verdict == SideVerdict::Divergent);
      CHECK(a.verdict == QaVerdict::QuasiAdmissible);
    }
  }
  // steeper than JS: the origin side converges
  const ProbeReport steep = divergence_probe(MarginalFn::power_law(5, -2.0));
  CHECK(steep.origin.verdict == SideVerdict::Convergent);
  CHECK(steep.tail.verdict == SideVerdict::Divergent);
  CHECK(steep.verdict == QaVerdict::NotCertified);
  const ProbeReport shallow = divergence_probe(MarginalFn::power_law(5, 0.5));
  CHECK(shallow.verdict == QaVerdict::NotCertified);
  CHECK(to_string(QaVerdict::QuasiAdmissible) == "quasi-admissible (numerically indicated)");
  CHECK_THROWS_AS(divergence_probe(MarginalFn::flat(5), ProbeConfig{3}), std::invalid_argument);
}

TEST_CASE("delta-SURE consistency by simulation") {
  McConfig cfg;
  cfg.n_samples = 400'000;
  const auto check = delta_sure_consistency(MarginalFn::james_stein(5), CompetitorK::positive_part(5), 1.0, cfg);
  CHECK(std::abs(check.mc_mean - check.expected_delta) < 3.0 * check.mc_se);
  // positive part improves on JS
  CHECK(check.expected_delta < 0.0);
  const auto a = delta_sure_consistency(MarginalFn::alpha(5, 2.0), CompetitorK::positive_part(5), 4.0, cfg);
  CHECK(std::abs(a.mc_mean - a.expected_delta) < 4.0 * a.mc_se);
}
