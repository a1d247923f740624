// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "trains/classifier.hpp"
#include "trains/families.hpp"
#include "trains/gamma.hpp"
#include "trains/hyptrig.hpp"
#include "trains/rng.hpp"
#include "trains/transforms.hpp"
#include "trains/verify.hpp"

using namespace trains;

namespace {

int failures = 0;

struct StopWatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(const std::string& id, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  if (!ok) ++failures;
}

TrainSpec power_flute(double a, double b, double c, int n_max) {
  return TrainSpec{PowerSeq{a, b, c}, ConstantSeq{0.0}, n_max};
}

KEstimate full_estimate(const TrainSpec& spec, int n, int grid) {
  const Train train(spec);
  return GammaEngine(train, GammaKind::Full).k_estimate(n, grid, 0.0);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

void criterion1() {
  {  // l_n = n: plateau, verdict, tail constant
    StopWatch watch;
    const TrainSpec spec = power_flute(1, 1, 0, 500);
    const KEstimate k500 = full_estimate(spec, 500, 256);
    const KEstimate k250 = full_estimate(spec, 250, 256);
    const Verdict verdict = classify(spec, k500);
    const double geometric = std::exp(1.0) / (std::exp(1.0) - 1.0);
    const double c2 = verdict.constants.count("c2") ? verdict.constants.at("c2") : -1.0;
    const double elapsed = watch.seconds();
    const bool plateau = (k500.value - k250.value) < 0.01;
    const bool verdict_ok = verdict.outcome == Verdict::Outcome::Hyperbolic &&
                            verdict.pathway == "divergent-lengths-tail-bounded";
    const bool tail_ok = std::fabs(c2 - geometric) <= 1e-6;
    const bool time_ok = elapsed <= 60.0;
    report("criterion-1a", plateau && verdict_ok && tail_ok && time_ok,
           "l_n=n: K_500=" + fmt(k500.value) + " K_250=" + fmt(k250.value) +
               " c2=" + fmt(c2) + " verdict=" + verdict_outcome_name(verdict.outcome) + "/" +
               verdict.pathway + " time=" + fmt(elapsed) + "s");
  }
  {  // l_n = sqrt(n): growing trajectory, not hyperbolic
    StopWatch watch;
    const TrainSpec spec = power_flute(1, 0.5, 0, 800);
    const KEstimate k100 = full_estimate(spec, 100, 256);
    const KEstimate k200 = full_estimate(spec, 200, 256);
    const KEstimate k400 = full_estimate(spec, 400, 256);
    const KEstimate k800 = full_estimate(spec, 800, 256);
    const Verdict verdict = classify(spec, k800);
    const double elapsed = watch.seconds();
    const bool increasing =
        k100.value < k200.value && k200.value < k400.value && k400.value < k800.value;
    const bool ratio = k800.value > 1.5 * k200.value;
    const bool verdict_ok = verdict.outcome == Verdict::Outcome::NotHyperbolic;
    const bool time_ok = elapsed <= 60.0;
    report("criterion-1b", increasing && ratio && verdict_ok && time_ok,
           "l_n=sqrt(n): K=" + fmt(k100.value) + "," + fmt(k200.value) + "," +
               fmt(k400.value) + "," + fmt(k800.value) +
               " verdict=" + verdict_outcome_name(verdict.outcome) + " time=" + fmt(elapsed) +
               "s");
  }
}

void criterion2() {
  const TrainSpec spec{ConstantSeq{1.0}, ConstantSeq{0.0}, 500};
  const Train train(spec);
  const GammaEngine engine(train, GammaKind::Full);
  // per-n sups pin K_N for every prefix at once
  bool all_half = true;
  double worst = 0.5;
  for (int n = 1; n <= 500; ++n) {
    const SupResult s = engine.sup_over_h(n, 256, 0.0);
    if (std::fabs(s.sup - 0.5) > 1e-9) {
      all_half = false;
      worst = s.sup;
    }
  }
  const KEstimate est = engine.k_estimate(500, 256, 0.0);
  const Verdict verdict = classify(spec, est);
  const bool verdict_ok = verdict.outcome == Verdict::Outcome::Hyperbolic &&
                          verdict.pathway == "bounded-lengths";
  report("criterion-2", all_half && std::fabs(est.value - 0.5) <= 1e-9 && verdict_ok,
         "l=1: K_N=" + fmt(est.value) + " worst per-n sup=" + fmt(worst) +
             " verdict=" + verdict_outcome_name(verdict.outcome) + "/" + verdict.pathway);
}

void criterion3() {
  struct Run {
    const char* id;
    double c;
  };
  const std::vector<Run> runs = {{"lemma33", 1.0},        {"lemma37", 1.0},
                                 {"lemma43", 1.0},        {"lemma46", 1.0},
                                 {"delta_sandwich", 0.5}, {"delta_sandwich", 1.0},
                                 {"delta_sandwich", 2.0}};
  bool ok = true;
  std::string detail;
  for (const Run& run : runs) {
    StopWatch watch;
    RegionSpec region;
    region.c = run.c;
    const InequalityReport rep = run_check(run.id, 1000000, 20260808, region);
    const double elapsed = watch.seconds();
    const bool this_ok = rep.violations == 0 && elapsed <= 30.0;
    if (!this_ok) ok = false;
    detail += std::string(run.id) + (std::string(run.id) == "delta_sandwich"
                                         ? "(c=" + fmt(run.c) + ")"
                                         : "") +
              "=" + std::to_string(rep.violations) + "/" + fmt(elapsed) + "s ";
  }
  report("criterion-3", ok, "violations/time: " + detail);
}

void criterion4() {
  bool ok = true;
  std::string detail;
  for (const double l0 : {0.1, 1.0}) {
    const InequalityReport a48 = fit_constants("prop48", l0, 20);
    const InequalityReport b48 = fit_constants("prop48", l0, 40);
    const InequalityReport a49 = fit_constants("prop49", l0, 8);
    const InequalityReport b49 = fit_constants("prop49", l0, 16);
    auto rel = [](double x, double y) { return std::fabs(x - y) / std::max(1e-300, x); };
    const bool finite = a48.fitted.at("c_lower") > 0 && std::isfinite(a48.fitted.at("c_upper")) &&
                        a49.fitted.at("c_lower") > 0 && std::isfinite(a49.fitted.at("c_upper"));
    const double drift48l = rel(a48.fitted.at("c_lower"), b48.fitted.at("c_lower"));
    const double drift48u = rel(a48.fitted.at("c_upper"), b48.fitted.at("c_upper"));
    const double drift49l = rel(a49.fitted.at("c_lower"), b49.fitted.at("c_lower"));
    const double drift49u = rel(a49.fitted.at("c_upper"), b49.fitted.at("c_upper"));
    const bool stable =
        drift48l < 0.05 && drift48u < 0.05 && drift49l < 0.05 && drift49u < 0.05;
    if (!finite || !stable) ok = false;
    detail += "l0=" + fmt(l0) + ": hexagon [" + fmt(b48.fitted.at("c_lower")) + "," +
              fmt(b48.fitted.at("c_upper")) + "] drift " + fmt(drift48l) + "/" + fmt(drift48u) +
              "; pentagon [" + fmt(b49.fitted.at("c_lower")) + "," +
              fmt(b49.fitted.at("c_upper")) + "] drift " + fmt(drift49l) + "/" +
              fmt(drift49u) + "  ";
  }
  report("criterion-4", ok, detail);
}

void criterion5() {
  SplitMix64 rng(505);
  double worst_gap = 0.0;
  bool converged = true;
  for (int i = 0; i < 1000; ++i) {
    const FermiPoint p{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    const FermiPoint q{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    try {
      const double gap = std::fabs(fermi_distance(p, q) - fermi_distance_numeric(p, q, 1e-7));
      worst_gap = std::max(worst_gap, gap);
    } catch (const std::exception&) {
      converged = false;
    }
  }
  double worst_triangle = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const FermiPoint a{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    const FermiPoint b{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    const FermiPoint c{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    worst_triangle = std::max(
        worst_triangle, fermi_distance(a, c) - fermi_distance(a, b) - fermi_distance(b, c));
  }
  report("criterion-5", converged && worst_gap <= 1e-6 && worst_triangle <= 1e-9,
         "closed-form vs oracle gap=" + fmt(worst_gap) +
             " worst triangle slack=" + fmt(worst_triangle));
}

void criterion6() {
  SplitMix64 rng(606);
  long long mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> l, r;
    const int n_max = 10 + static_cast<int>(rng.below(15));
    const bool flute = (i % 2) == 0;
    for (int k = 0; k < n_max; ++k) {
      l.push_back(rng.uniform(0.1, 6.0));
      r.push_back(flute ? 0.0 : rng.uniform(0.0, 4.0));
    }
    const Train train(l, r);
    const GammaKind kind = (i % 4 < 2) ? GammaKind::Full : GammaKind::Zero;
    const GammaEngine eng(train, kind);
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_max)));
    const double h = rng.uniform(0.0, train.l(n));
    const MinGammaResult window_min = eng.min_gamma(n, h);
    double brute = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= n_max; ++m) brute = std::min(brute, eng.gamma(n, m, h));
    if (window_min.value != brute) ++mismatches;
  }
  report("criterion-6", mismatches == 0,
         "window-min vs full-range min mismatches: " + std::to_string(mismatches) + "/1000");
}

void criterion7() {
  SplitMix64 rng(707);
  long long bad = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> l, r, r2;
    const int n_max = 20;
    for (int k = 0; k < n_max; ++k) {
      l.push_back(rng.uniform(0.2, 5.0));
      r.push_back(rng.uniform(0.0, 4.0));
      r2.push_back(r.back() * rng.uniform());  // pointwise shrink
    }
    const Train big(l, r), small(l, r2);
    const GammaEngine eb(big, GammaKind::Full), es(small, GammaKind::Full);
    std::vector<std::vector<double>> cands;
    for (int n = 1; n <= n_max; ++n) cands.push_back(eb.sup_candidates(n, 48, 0.0));
    if (!(es.k_estimate_fixed(cands).value <= eb.k_estimate_fixed(cands).value)) ++bad;
  }
  report("criterion-7", bad == 0,
         "shrunken-r estimates above the original: " + std::to_string(bad) + "/100");
}

void criterion8() {
  SplitMix64 rng(808);
  long long bad = 0, skipped = 0;
  std::string worst;
  auto measure = [&](const TrainSpec& s, GammaKind kind) {
    const Train t(s);
    return GammaEngine(t, kind).k_estimate(s.n_max, 64, 0.0);
  };
  auto check = [&](const char* tag, const KEstimate& in, const KEstimate& out, double bound) {
    if (in.saturated || out.saturated) {
      ++skipped;
      return;
    }
    if (out.value > bound + 1e-6) {
      ++bad;
      worst = std::string(tag) + " measured " + fmt(out.value) + " bound " + fmt(bound);
    }
  };
  // 100 perturbations with c = 1
  for (int i = 0; i < 100; ++i) {
    std::vector<double> l, r, dl, dr;
    for (int k = 0; k < 40; ++k) {
      l.push_back(rng.uniform(0.5, 4.0));
      r.push_back(rng.uniform(0.0, 2.0));
      const double lo = -std::min(l.back() - 0.05, 1.0);
      dl.push_back(rng.uniform(lo, 1.0));
      dr.push_back(rng.uniform(-std::min(r.back(), 1.0), 1.0));
    }
    const TrainSpec spec{ExplicitSeq{l}, ExplicitSeq{r}, 40};
    const KEstimate kin = measure(spec, GammaKind::Full);
    const TransformRecord rec = perturb(spec, ExplicitSeq{dl}, ExplicitSeq{dr}, kin.value);
    check("perturb", kin, measure(rec.output, GammaKind::Full), *rec.predicted_bound);
  }
  // 50 scalings with lambda in [1, 2]
  for (int i = 0; i < 50; ++i) {
    std::vector<double> l, r;
    for (int k = 0; k < 40; ++k) {
      l.push_back(rng.uniform(0.5, 4.0));
      r.push_back(rng.uniform(0.0, 2.0));
    }
    const TrainSpec spec{ExplicitSeq{l}, ExplicitSeq{r}, 40};
    const double lambda = rng.uniform(1.0, 2.0);
    const double mu = rng.uniform(0.0, lambda);
    const KEstimate kin = measure(spec, GammaKind::Full);
    const TransformRecord rec = scale(spec, lambda, mu, kin.value);
    check("scale", kin, measure(rec.output, GammaKind::Full), *rec.predicted_bound);
  }
  // 50 adjacent-swap permutations of flutes
  for (int i = 0; i < 50; ++i) {
    std::vector<double> l;
    for (int k = 0; k < 40; ++k) l.push_back(rng.uniform(0.3, 4.0) + 0.05 * k);
    const TrainSpec spec{ExplicitSeq{l}, ConstantSeq{0.0}, 40};
    const std::vector<int> sigma = windowed_shuffle_permutation(40, 1, rng.next());
    const KEstimate kin = measure(spec, GammaKind::Zero);
    const TransformRecord rec = permute_bounded(spec, sigma, 1, kin.value);
    check("permute", kin, measure(rec.output, GammaKind::Zero), *rec.predicted_bound);
  }
  // 50 two-part unions of hyperbolic-class parts
  for (int i = 0; i < 50; ++i) {
    std::vector<double> la, lb;
    const double slope_a = rng.uniform(0.6, 1.5), off_a = rng.uniform(0.2, 2.0);
    const double level_b = rng.uniform(0.5, 2.0);
    for (int k = 1; k <= 24; ++k) {
      la.push_back(slope_a * k + off_a);
      lb.push_back(level_b + 0.1 * rng.uniform());
    }
    const TrainSpec a{ExplicitSeq{la}, ConstantSeq{0.0}, 24};
    const TrainSpec b{ExplicitSeq{lb}, ConstantSeq{0.0}, 24};
    std::vector<int> assignment;
    int ia = 0, ib = 0;
    while (ia < 24 || ib < 24) {
      if (ia < 24 && (ib >= 24 || rng.uniform() < 0.5)) {
        assignment.push_back(0);
        ++ia;
      } else {
        assignment.push_back(1);
        ++ib;
      }
    }
    const KEstimate ka = measure(a, GammaKind::Zero);
    const KEstimate kb = measure(b, GammaKind::Zero);
    const TransformRecord rec = union_trains({a, b}, assignment, {ka.value, kb.value});
    check("union", ka, measure(rec.output, GammaKind::Zero), *rec.predicted_bound);
  }
  report("criterion-8", bad == 0,
         "bound violations: " + std::to_string(bad) + " (skipped saturated: " +
             std::to_string(skipped) + ")" + (worst.empty() ? "" : "; worst: " + worst));
}

void criterion9() {
  const TrainSpec ladder = power_flute(1, 1, 0, 500);
  const KEstimate k_ladder = full_estimate(ladder, 500, 256);
  const NecessaryChecks ladder_checks =
      necessary_checks(ladder, k_ladder, quasi_increasing_c1(Train(ladder)).c1);
  const TrainSpec ones{ConstantSeq{1.0}, ConstantSeq{0.0}, 500};
  const KEstimate k_ones = full_estimate(ones, 500, 256);
  const NecessaryChecks ones_checks =
      necessary_checks(ones, k_ones, quasi_increasing_c1(Train(ones)).c1);
  report("criterion-9",
         ladder_checks.violations.empty() && ones_checks.violations.empty(),
         "violations: ladder=" + std::to_string(ladder_checks.violations.size()) +
             " (gates " + std::to_string(ladder_checks.twist_gates_fired) + "/" +
             std::to_string(ladder_checks.tail_gates_fired) +
             "), flute=" + std::to_string(ones_checks.violations.size()) + " (gates " +
             std::to_string(ones_checks.twist_gates_fired) + "/" +
             std::to_string(ones_checks.tail_gates_fired) + ")");
}

void criterion10() {
  // sqrt terms at the even positions, filler within the gap bound of its
  // neighbours: the composite flute inherits the divergence.
  const int pairs = 400;
  const TrainSpec base = power_flute(1, 0.5, 0, pairs);
  std::vector<int> positions;
  for (int k = 1; k <= pairs; ++k) positions.push_back(2 * k);
  const TransformRecord rec =
      embed_subsequence(base, positions, PowerSeq{1.0 / std::sqrt(2.0), 0.5, 0.0}, 2);
  const Train composite(rec.output);
  const GammaEngine engine(composite, GammaKind::Zero);
  const KEstimate k100 = engine.k_estimate(100, 128, 0.0);
  const KEstimate k200 = engine.k_estimate(200, 128, 0.0);
  const KEstimate k400 = engine.k_estimate(400, 128, 0.0);
  const KEstimate k800 = engine.k_estimate(800, 128, 0.0);
  const bool diverging = k100.value < k200.value && k200.value < k400.value &&
                         k400.value < k800.value && k800.value > k100.value + 0.5;
  report("criterion-10", diverging,
         "composite K0 trajectory: " + fmt(k100.value) + "," + fmt(k200.value) + "," +
             fmt(k400.value) + "," + fmt(k800.value));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
