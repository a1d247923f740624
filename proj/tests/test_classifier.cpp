#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "trains/classifier.hpp"

using namespace trains;

namespace {

TrainSpec power_spec(double a, double b, double c, int n_max) {
  return TrainSpec{PowerSeq{a, b, c}, ConstantSeq{0.0}, n_max};
}

KEstimate estimate(const TrainSpec& spec, int grid = 96) {
  const Train train(spec);
  return GammaEngine(train, GammaKind::Full).k_estimate(spec.n_max, grid, 0.0);
}

}  // namespace

TEST_CASE("quasi-increasing constant") {
  CHECK(quasi_increasing_c1(Train({1, 2, 3, 4}, {0, 0, 0, 0})).c1 == 0.0);
  const QuasiIncreasing q = quasi_increasing_c1(Train({2, 1, 3}, {0, 0, 0}));
  CHECK(q.c1 == 1.0);
  CHECK(q.witness_m == 1);
  CHECK(q.witness_n == 2);
  std::vector<double> lsqrt, rz;
  for (int i = 1; i <= 50; ++i) {
    lsqrt.push_back(std::sqrt(static_cast<double>(i)));
    rz.push_back(0.0);
  }
  CHECK(quasi_increasing_c1(Train(lsqrt, rz)).c1 == 0.0);
}

TEST_CASE("tail constant: geometric series") {
  const TrainSpec spec = power_spec(1.0, 1.0, 0.0, 300);
  const double geometric = std::exp(1.0) / (std::exp(1.0) - 1.0);
  for (const int n : {2, 5, 50, 150}) {
    const TailConstant c2 = tail_constant_c2(spec, n);
    CHECK(c2.certified);
    CHECK(c2.value == doctest::Approx(geometric).epsilon(1e-8));
  }
}

TEST_CASE("tail constant: sqrt growth matches the integral comparison") {
  const TrainSpec spec = power_spec(1.0, 0.5, 0.0, 800);
  // Sigma_{k>=n} e^{sqrt n - sqrt k} ~ 2 sqrt n + 2 (+ Euler-Maclaurin 1/2)
  for (const int n : {100, 400}) {
    const TailConstant c2 = tail_constant_c2(spec, n);
    CHECK(c2.certified);
    const double integral = 2.0 * std::sqrt(static_cast<double>(n)) + 2.5;
    CHECK(std::fabs(c2.value - integral) < 0.6);
  }
  const double at100 = tail_constant_c2(spec, 100).value;
  const double at400 = tail_constant_c2(spec, 400).value;
  CHECK(at400 - at100 > 15.0);  // ~ 2 (sqrt(400) - sqrt(100)) = 20
}

TEST_CASE("tail constant: finite-horizon constant sequence") {
  TrainSpec spec{ConstantSeq{2.0}, ConstantSeq{0.0}, 40};
  const TailConstant c2 = tail_constant_c2(spec, 15);
  CHECK_FALSE(c2.certified);  // constant tails never certify
  CHECK(c2.value == doctest::Approx(40 - 15 + 1).epsilon(1e-12));
  CHECK_THROWS_AS(tail_constant_c2(spec, 1), std::out_of_range);
}

TEST_CASE("tail constant depends only on the tail") {
  // prepending terms below n cannot change it
  ExplicitSeq a{{5, 1, 2, 3, 4, 5, 6, 7}};
  ExplicitSeq b{{1, 9, 2, 3, 4, 5, 6, 7}};
  const TrainSpec sa{a, ConstantSeq{0.0}, 8};
  const TrainSpec sb{b, ConstantSeq{0.0}, 8};
  CHECK(tail_constant_c2(sa, 3).value == tail_constant_c2(sb, 3).value);
}

TEST_CASE("classify: bounded lengths") {
  TrainSpec spec{ConstantSeq{1.0}, ConstantSeq{0.5}, 200};
  const KEstimate est = estimate(spec);
  const Verdict v = classify(spec, est);
  CHECK(v.outcome == Verdict::Outcome::Hyperbolic);
  CHECK(v.pathway == "bounded-lengths");
  CHECK(v.constants.at("c") == doctest::Approx(1.0));
}

TEST_CASE("classify: divergent lengths with bounded tail") {
  const TrainSpec spec = power_spec(1.0, 1.0, 0.0, 200);
  const KEstimate est = estimate(spec);
  const Verdict v = classify(spec, est);
  CHECK(v.outcome == Verdict::Outcome::Hyperbolic);
  CHECK(v.pathway == "divergent-lengths-tail-bounded");
  CHECK(v.constants.at("c2") ==
        doctest::Approx(std::exp(1.0) / (std::exp(1.0) - 1.0)).epsilon(1e-6));
}

TEST_CASE("classify: divergent lengths with growing tail constant") {
  const TrainSpec spec = power_spec(1.0, 0.5, 0.0, 400);
  const KEstimate est = estimate(spec);
  const Verdict v = classify(spec, est);
  CHECK(v.outcome == Verdict::Outcome::NotHyperbolic);
  CHECK(v.pathway == "divergent-lengths-tail-growth");
}

TEST_CASE("classify: unbounded twists kill a divergent train") {
  TrainSpec spec{PowerSeq{1.0, 1.0, 0.0}, PowerSeq{0.5, 1.0, 0.0}, 200};
  const Train train(spec);
  const KEstimate est = GammaEngine(train, GammaKind::Full).k_estimate(200, 64, 0.0);
  const Verdict v = classify(spec, est);
  CHECK(v.outcome == Verdict::Outcome::NotHyperbolic);
  CHECK(v.pathway == "divergent-lengths-unbounded-r");
}

TEST_CASE("classify downgrades on a trajectory mismatch") {
  TrainSpec spec{ConstantSeq{1.0}, ConstantSeq{0.0}, 100};
  KEstimate est = estimate(spec);
  // a bounded train whose K_N is (bogusly) still climbing: evidence conflict
  est.trajectory = {{25, 0.2}, {50, 0.3}, {75, 0.45}, {100, 0.7}};
  const Verdict v = classify(spec, est);
  CHECK(v.outcome == Verdict::Outcome::Inconclusive);
}

TEST_CASE("classify absorbs degenerate inputs instead of erroring") {
  // a steeply growing two-term train: no branch can fire, stays inconclusive
  TrainSpec spec{ExplicitSeq{{1.0, 40.0, 80.0, 120.0}}, ConstantSeq{0.0}, 4};
  const Train train(spec);
  const KEstimate est = GammaEngine(train, GammaKind::Full).k_estimate(4, 16, 0.0);
  const Verdict v = classify(spec, est);
  CHECK(v.outcome == Verdict::Outcome::Inconclusive);
}

TEST_CASE("classify is deterministic") {
  const TrainSpec spec = power_spec(1.0, 1.0, 0.0, 120);
  const KEstimate est = estimate(spec, 48);
  const Verdict a = classify(spec, est);
  const Verdict b = classify(spec, est);
  CHECK(a.outcome == b.outcome);
  CHECK(a.pathway == b.pathway);
  CHECK(a.constants == b.constants);
}

TEST_CASE("necessary checks") {
  {  // l == 1, K = 0.5: neither gate ever fires
    TrainSpec spec{ConstantSeq{1.0}, ConstantSeq{0.0}, 150};
    const KEstimate est = estimate(spec, 64);
    CHECK(est.value == doctest::Approx(0.5).epsilon(1e-9));
    const NecessaryChecks rep = necessary_checks(spec, est, 0.0);
    CHECK(rep.twist_gates_fired == 0);
    CHECK(rep.tail_gates_fired == 0);
    CHECK(rep.violations.empty());
  }
  {  // ladder: gates fire and the bounds hold with the computed K
    const TrainSpec spec = power_spec(1.0, 1.0, 0.0, 200);
    const KEstimate est = estimate(spec);
    const NecessaryChecks rep = necessary_checks(spec, est, 0.0);
    CHECK(rep.twist_gates_fired > 0);
    CHECK(rep.tail_gates_fired > 0);
    CHECK(rep.violations.empty());
  }
  {  // saturated estimates are rejected
    TrainSpec spec{ConstantSeq{1.0}, ConstantSeq{0.0}, 10};
    KEstimate est = estimate(spec, 16);
    est.saturated = true;
    CHECK_THROWS_AS(necessary_checks(spec, est, 0.0), std::invalid_argument);
  }
}
