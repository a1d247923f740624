#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "trains/verify.hpp"

using namespace trains;

TEST_CASE("reports are reproducible") {
  const InequalityReport a = run_check("lemma33", 20000, 7);
  const InequalityReport b = run_check("lemma33", 20000, 7);
  CHECK(a.violations == b.violations);
  CHECK(a.worst_margin == b.worst_margin);
  CHECK(a.worst_witness == b.worst_witness);
  const InequalityReport c = run_check("lemma33", 20000, 8);
  CHECK(c.worst_margin != a.worst_margin);  // different seed, different stream
}

TEST_CASE("worker count does not change a report") {
  const InequalityReport a = run_check("lemma37", 300000, 11, {}, 1);
  const InequalityReport b = run_check("lemma37", 300000, 11, {}, 4);
  CHECK(a.violations == b.violations);
  CHECK(a.worst_margin == b.worst_margin);
  CHECK(a.worst_witness == b.worst_witness);
}

TEST_CASE("single-point crossing bound example") {
  // l_k = 1, h = 1.5, l_{k+1} = 2, r_k = 5: LHS 4.5 against e^1.5 * Delta
  const double lhs = 5.0 + 1.5 - 2.0;
  const double delta = std::exp(-1.0) + std::exp(-2.0) + 1.0 + 2.0;
  const double rhs = std::exp(1.5) * delta;
  CHECK(lhs == 4.5);
  CHECK(rhs == doctest::Approx(15.701).epsilon(1e-4));
  CHECK(lhs < rhs);
}

TEST_CASE("reverse bound equality branch") {
  // l_k = h = 1, r_k = 1, l_{k+1} = 2: both sides are exactly 1
  const double lk = 1.0, h = 1.0, lk1 = 2.0, rk = 1.0;
  const double lhs = std::exp(h) * (std::exp(-0.5 * std::max(lk + lk1 - rk, 0.0)) +
                                    std::max(rk - lk - lk1, 0.0));
  const double p = std::max(rk + h - lk1, 0.0);
  const double rhs = (1.0 + p) * std::exp(0.5 * p);
  CHECK(lhs == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rhs == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::fabs(rhs - lhs) <= 1e-12);
}

TEST_CASE("sampled checks hold on moderate runs") {
  for (const char* id : {"lemma33", "lemma37", "lemma43", "lemma46", "cor47"}) {
    const InequalityReport rep = run_check(id, 50000, 3);
    INFO(id << " worst margin " << rep.worst_margin);
    CHECK(rep.violations == 0);
    CHECK(rep.samples == 50000);
  }
  for (const double c : {0.5, 1.0, 2.0}) {
    RegionSpec region;
    region.c = c;
    const InequalityReport rep = run_check("delta_sandwich", 50000, 3, region);
    INFO("c = " << c << " worst margin " << rep.worst_margin);
    CHECK(rep.violations == 0);
  }
}

TEST_CASE("unknown check id") {
  CHECK_THROWS_AS(run_check("lemma99", 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_check("lemma33", 0, 1), std::invalid_argument);
}

TEST_CASE("degenerate one-point grid collapses lower to upper") {
  const InequalityReport rep = fit_constants("prop48", 10.0, 1);
  // the grid keeps only x = y = 10 with t in {0, 10, 20, 30}
  CHECK(rep.fitted.at("c_lower") <= rep.fitted.at("c_upper"));
  const InequalityReport tiny = fit_constants("cor410", 10.0, 1);
  CHECK(tiny.fitted.at("c_lower") <= tiny.fitted.at("c_upper"));
}

TEST_CASE("fitted constants are positive and finite") {
  for (const double l0 : {0.1, 1.0}) {
    const InequalityReport p48 = fit_constants("prop48", l0, 12);
    CHECK(p48.fitted.at("c_lower") > 0.0);
    CHECK(std::isfinite(p48.fitted.at("c_upper")));
    CHECK(p48.violations == 0);
    const InequalityReport p49 = fit_constants("prop49", l0, 8);
    CHECK(p49.fitted.at("c_lower") > 0.0);
    CHECK(std::isfinite(p49.fitted.at("c_upper")));
    const InequalityReport c410 = fit_constants("cor410", l0, 8);
    CHECK(c410.fitted.at("c_lower") > 0.0);
    CHECK(std::isfinite(c410.fitted.at("c_upper")));
  }
  // the universal lower constant over (0, 10] stays positive
  const InequalityReport uni = fit_constants("prop48", 0.0, 12);
  CHECK(uni.fitted.at("c_lower") > 0.0);
}
