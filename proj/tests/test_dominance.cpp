#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "shrinkage/dominance.hpp"
#include "shrinkage/risk.hpp"

using namespace shrinkage;

TEST_CASE("grids") {
  const auto w = standard_w_grid();
  CHECK(w.size() == 60);
  CHECK(w.front() == 0.0);
  CHECK(w.back() == 50.0);
  CHECK(std::is_sorted(w.begin(), w.end()));
  CHECK(std::adjacent_find(w.begin(), w.end()) == w.end());

  const auto d = dominance_grid(1e4, 1000);
  CHECK(d.size() == 1000);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == doctest::Approx(1e-4));
  CHECK(d.back() == 1e4);
  for (std::size_t i = 2; i < d.size(); ++i) CHECK(d[i] / d[i - 1] == doctest::Approx(d[2] / d[1]));

  CHECK(standard_lambda_grid() == std::vector<double>{0, 1, 4, 9, 25});
}

TEST_CASE("condition check verdicts") {
  const auto grid = dominance_grid();
  for (int p : {3, 5, 8}) {
    for (double alpha : {1.0, 2.0, 5.0, 20.0}) {
      CHECK(check_kubokawa_condition(PhiFamily::alpha(p, alpha), grid).verdict ==
            ConditionVerdict::SatisfiesKubokawa);
    }
    CHECK(check_kubokawa_condition(PhiFamily::positive_part(p), grid).verdict ==
          ConditionVerdict::SatisfiesKubokawa);
    CHECK(check_kubokawa_condition(PhiFamily::james_stein(p), grid).verdict ==
          ConditionVerdict::SatisfiesKubokawa);
  }
  const auto lk = check_kubokawa_condition(PhiFamily::li_kuo(5, 0.2), grid);
  CHECK(lk.verdict == ConditionVerdict::FailsLowerBound);
  REQUIRE(lk.witness_w);
  CHECK(*lk.witness_w == 0.0);

  const auto kt = check_kubokawa_condition(PhiFamily::kuriki_takemura_1(5, 0.3), grid);
  CHECK(kt.verdict == ConditionVerdict::FailsLowerBound);
  CHECK(*kt.witness_w > 0.0);
  CHECK(*kt.witness_w <= 0.09);

  const auto big = check_kubokawa_condition(PhiFamily::constant(5, 4.0), grid);
  CHECK(big.verdict == ConditionVerdict::FailsUpperBound);
  CHECK(*big.witness_w == 0.0);

  // phi = 1 starts inside the band and drops below phi_K once phi_K > 1
  const auto one = check_kubokawa_condition(PhiFamily::constant(5, 1.0), grid);
  CHECK(one.verdict == ConditionVerdict::FailsLowerBound);
  CHECK(phi(PhiFamily::kubokawa(5), *one.witness_w) > 1.0);
  CHECK(phi(PhiFamily::kubokawa(5), *one.witness_w * 0.98) <= 1.0 + 1e-9);
}

TEST_CASE("condition grid validation") {
  std::vector<double> short_grid{0.0, 1.0, 2.0};
  CHECK_THROWS_AS(check_kubokawa_condition(PhiFamily::alpha(5, 1.0), short_grid), std::invalid_argument);
  auto grid = dominance_grid(10.0, 60);
  grid[0] = 1e-6;
  CHECK_THROWS_AS(check_kubokawa_condition(PhiFamily::alpha(5, 1.0), grid), std::invalid_argument);
  grid = dominance_grid(10.0, 60);
  std::swap(grid[3], grid[4]);
  CHECK_THROWS_AS(check_kubokawa_condition(PhiFamily::alpha(5, 1.0), grid), std::invalid_argument);
}

TEST_CASE("js inequality has no non-constant solution on the grid") {
  const auto grid = standard_w_grid();
  const PhiFamily js = PhiFamily::james_stein(5);
  for (double w : grid) CHECK(js_inequality_value(js, w) == 0.0);
  CHECK_FALSE(js_inequality_scan(js, grid));

  CHECK(js_inequality_value(PhiFamily::positive_part(5), 0.1) == doctest::Approx(-8.01).epsilon(1e-14));
  for (const auto& fam : {PhiFamily::alpha(5, 1.0), PhiFamily::alpha(5, 50.0),
                          PhiFamily::positive_part(5), PhiFamily::li_kuo(5, 0.2),
                          PhiFamily::kuriki_takemura_1(5, 0.3), PhiFamily::kuriki_takemura_2(5, 0.3)}) {
    const auto witness = js_inequality_scan(fam, grid);
    REQUIRE(witness);
    CHECK(witness->value < 0.0);
    CHECK(js_inequality_value(fam, witness->w) == witness->value);
  }
  CHECK(js_inequality_value(PhiFamily::li_kuo(5, 0.2), 0.0) == -INFINITY);
}

TEST_CASE("dominance reports") {
  const auto grid = dominance_grid();
  const auto lambdas = standard_lambda_grid();

  const auto js = assess_dominance(PhiFamily::james_stein(5), grid, lambdas);
  CHECK(js.margins_nonnegative(kMarginTol));
  CHECK_FALSE(js.strict_improvement);
  for (const auto& row : js.risk_margin) CHECK(std::abs(row.margin) < 1e-9);

  const auto a2 = assess_dominance(PhiFamily::alpha(5, 2.0), grid, lambdas);
  CHECK(a2.condition_verdict == ConditionVerdict::SatisfiesKubokawa);
  CHECK_FALSE(a2.witness_w);
  CHECK(a2.strict_improvement);
  REQUIRE(a2.origin_gain);
  CHECK(*a2.origin_gain == doctest::Approx(a2.risk_margin[0].margin).epsilon(1e-8));
  for (const auto& row : a2.risk_margin) {
    REQUIRE(row.kubokawa_diff);
    CHECK(oracle::near(*row.kubokawa_diff, row.margin, 1e-7, 1e-9));
  }

  // fails the sufficient condition yet still beats JS
  const auto lk = assess_dominance(PhiFamily::li_kuo(5, 0.2), grid, lambdas);
  CHECK(lk.condition_verdict == ConditionVerdict::FailsLowerBound);
  CHECK(lk.margins_nonnegative(kMarginTol));
  CHECK(lk.strict_improvement);

  const auto id = assess_dominance(PhiFamily::identity(5), grid, lambdas);
  CHECK_FALSE(id.margins_nonnegative(kMarginTol));
  CHECK_FALSE(id.origin_gain);
  CHECK_FALSE(id.risk_margin[0].kubokawa_diff);
}
