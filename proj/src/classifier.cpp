#include "trains/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trains/kahan.hpp"

namespace trains {

namespace {

constexpr double kTailRelTol = 1e-9;
constexpr long long kTailMaxTerms = 5'000'000;

/// Least-squares slope of values[i] against their index over [begin, end).
double ls_slope(const std::vector<double>& values, std::size_t begin, std::size_t end) {
  const std::size_t n = end - begin;
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = begin; i < end; ++i) {
    const double x = static_cast<double>(i);
    sx += x;
    sy += values[i];
    sxx += x * x;
    sxy += x * values[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

struct Trend {
  double fitted_growth = 0.0;  // slope * trailing span
  double lead_min = 0.0, trail_min = 0.0;
  double max_value = 0.0;
  bool drifts_up = false;
};

Trend sequence_trend(const std::vector<double>& v) {
  Trend t;
  const std::size_t n = v.size();
  if (n == 0) return t;
  const std::size_t half = n / 2;
  t.fitted_growth = ls_slope(v, half, n) * static_cast<double>(n - half);
  t.lead_min = *std::min_element(v.begin(), v.begin() + std::max<std::size_t>(half, 1));
  t.trail_min = *std::min_element(v.begin() + half, v.end());
  t.max_value = *std::max_element(v.begin(), v.end());
  t.drifts_up = t.trail_min > t.lead_min;
  return t;
}

/// Upper bound on Sigma_{k >= start} e^{l_ref - l_k} by doubling blocks:
/// each block [s, 2s) contributes at most s * e^{l_ref - l(s)} once l is
/// non-decreasing there. Returns +inf when the family cannot certify.
double tail_remainder_bound(const SequenceFamily& l, double l_ref, long long start) {
  if (!family_has_monotone_divergent_tail(l)) {
    return std::numeric_limits<double>::infinity();
  }
  double bound = 0.0;
  long long s = start;
  double prev_block = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 200; ++j) {
    if (s > (1LL << 55)) break;
    const double block =
        static_cast<double>(s) * std::exp(l_ref - family_term(l, static_cast<int>(
                                                     std::min<long long>(s, 1LL << 30))));
    if (!(block < prev_block) && j > 4) {
      return std::numeric_limits<double>::infinity();  // not contracting
    }
    prev_block = block;
    bound += block;
    if (block < 1e-18 * std::max(bound, 1e-300)) return bound;
    s *= 2;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

const char* verdict_outcome_name(Verdict::Outcome o) {
  switch (o) {
    case Verdict::Outcome::Hyperbolic: return "hyperbolic";
    case Verdict::Outcome::NotHyperbolic: return "not-hyperbolic";
    case Verdict::Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

QuasiIncreasing quasi_increasing_c1(const Train& train) {
  QuasiIncreasing q;
  double run_max = -std::numeric_limits<double>::infinity();
  int run_arg = 1;
  for (int n = 1; n <= train.size(); ++n) {
    if (train.l(n) > run_max) {
      run_max = train.l(n);
      run_arg = n;
    }
    const double gap = run_max - train.l(n);
    if (gap > q.c1) {
      q.c1 = gap;
      q.witness_m = run_arg;
      q.witness_n = n;
    }
  }
  return q;
}

TailConstant tail_constant_c2(const TrainSpec& spec, int n) {
  if (n < 2 || n > spec.n_max) throw std::out_of_range("tail constant needs 1 < n <= n_max");
  const double l_ref = family_term(spec.l, n);
  TailConstant out;
  KahanSum sum;
  for (int k = n; k <= spec.n_max; ++k) {
    sum.add(std::exp(l_ref - family_term(spec.l, k)));
    ++out.terms;
  }
  if (!family_is_closed_form(spec.l) || !family_has_monotone_divergent_tail(spec.l)) {
    out.value = sum.value();
    out.certified = false;
    return out;
  }
  long long k = spec.n_max + 1;
  while (out.terms < kTailMaxTerms) {
    if ((out.terms & 63) == 0) {
      const double rem = tail_remainder_bound(spec.l, l_ref, k);
      if (rem <= kTailRelTol * sum.value()) {
        out.value = sum.value();
        out.certified = true;
        return out;
      }
    }
    sum.add(std::exp(l_ref - family_term(spec.l, static_cast<int>(std::min(k, 1LL << 30)))));
    ++out.terms;
    ++k;
  }
  out.value = sum.value();
  out.certified = false;
  return out;
}

Verdict classify(const TrainSpec& spec, const KEstimate& k_est, const ClassifyOptions& opt) {
  const Train train(spec);
  const int N = train.size();
  std::vector<double> lv(static_cast<std::size_t>(N));
  std::vector<double> rv(static_cast<std::size_t>(N));
  for (int n = 1; n <= N; ++n) {
    lv[static_cast<std::size_t>(n - 1)] = train.l(n);
    rv[static_cast<std::size_t>(n - 1)] = train.r(n);
  }
  const Trend lt = sequence_trend(lv);
  const Trend rt = sequence_trend(rv);
  const QuasiIncreasing qi = quasi_increasing_c1(train);

  Verdict v;
  v.constants["K"] = k_est.value;
  v.constants["c1"] = qi.c1;
  v.constants["cap"] = k_est.cap;
  if (k_est.h_floor > 0.0) v.constants["l0"] = k_est.h_floor;
  v.diagnostics.push_back("trend-based verdict over horizon n_max=" + std::to_string(N) +
                          "; all statements are truncation evidence");
  if (k_est.saturated) v.diagnostics.push_back("K estimate saturated at cap");

  const QuasiIncreasing qi_half =
      quasi_increasing_c1(Train(std::vector<double>(lv.begin(), lv.begin() + std::max(N / 2, 1)),
                                std::vector<double>(rv.begin(), rv.begin() + std::max(N / 2, 1))));
  const bool c1_stable = qi.c1 <= qi_half.c1 + 1e-12;

  if (lt.fitted_growth < opt.growth_threshold) {
    // Bounded lengths: hyperbolic outright, no condition on r.
    v.outcome = Verdict::Outcome::Hyperbolic;
    v.pathway = "bounded-lengths";
    v.constants["c"] = lt.max_value;
  } else if (N < 8) {
    // too short for the tail ratio test; degenerate inputs stay inconclusive
    v.outcome = Verdict::Outcome::Inconclusive;
    v.pathway = "horizon-too-short";
  } else if (lt.drifts_up && c1_stable) {
    // Divergent lengths with a stable quasi-increasing constant: hyperbolic
    // iff r stays bounded and the tail condition holds.
    const bool r_unbounded = rt.fitted_growth >= opt.r_growth_threshold && rt.drifts_up;
    const int n_hi = std::max(3, N / 2);
    const int n_lo = std::max(2, n_hi / 4);
    const int n_mid = std::max(n_lo + 1, n_hi / 2);
    const TailConstant c2_lo = tail_constant_c2(spec, n_lo);
    const TailConstant c2_mid = tail_constant_c2(spec, n_mid);
    const TailConstant c2_hi = tail_constant_c2(spec, n_hi);
    const double ratio = c2_hi.value / std::max(c2_lo.value, 1e-300);
    v.constants["c2"] = std::max({c2_lo.value, c2_mid.value, c2_hi.value});
    v.constants["c2_ratio_two_doublings"] = ratio;
    v.constants["sup_r"] = rt.max_value;
    if (!c2_lo.certified || !c2_hi.certified) {
      v.diagnostics.push_back("tail sums not certifiable past the horizon; finite-horizon values used");
    }
    if (r_unbounded) {
      v.outcome = Verdict::Outcome::NotHyperbolic;
      v.pathway = "divergent-lengths-unbounded-r";
    } else if (ratio > opt.tail_ratio_threshold) {
      v.outcome = Verdict::Outcome::NotHyperbolic;
      v.pathway = "divergent-lengths-tail-growth";
    } else {
      v.outcome = Verdict::Outcome::Hyperbolic;
      v.pathway = "divergent-lengths-tail-bounded";
    }
  } else {
    v.outcome = Verdict::Outcome::Inconclusive;
    v.pathway = "insufficient-trend-evidence";
    if (!c1_stable) v.diagnostics.push_back("quasi-increasing constant still growing across the horizon");
  }

  // Cross-check against the K_N trajectory (the two directions of the
  // characterization): hyperbolic needs a plateau, not-hyperbolic growth.
  const auto& traj = k_est.trajectory;
  if (v.outcome == Verdict::Outcome::Hyperbolic && traj.size() >= 2) {
    const double k_prev = traj[traj.size() - 2].second;
    const double k_last = traj.back().second;
    const double rel = (k_last - k_prev) / std::max(k_prev, 1e-12);
    if (rel > opt.plateau_rel_tol) {
      v.outcome = Verdict::Outcome::Inconclusive;
      v.diagnostics.push_back("downgraded: K_N trajectory still rising (rel " +
                              std::to_string(rel) + ")");
    }
  } else if (v.outcome == Verdict::Outcome::NotHyperbolic && traj.size() >= 2 &&
             !k_est.saturated) {
    bool strictly_increasing = true;
    for (std::size_t i = 1; i < traj.size(); ++i) {
      if (!(traj[i].second > traj[i - 1].second)) strictly_increasing = false;
    }
    if (!strictly_increasing) {
      v.outcome = Verdict::Outcome::Inconclusive;
      v.diagnostics.push_back("downgraded: K_N trajectory not strictly increasing");
    }
  }
  return v;
}

NecessaryChecks necessary_checks(const TrainSpec& spec, const KEstimate& k_est, double c1) {
  if (k_est.saturated) throw std::invalid_argument("necessary checks need an unsaturated K");
  const Train train(spec);
  const double K = k_est.value;
  const double M = std::max(K, 1.0);
  const double twist_bound = 2.0 * M + 2.0 * std::log(M) + 3.0 * c1;
  NecessaryChecks out;
  constexpr double slack = 1e-9;
  for (int n = 1; n <= train.size() - 1; ++n) {
    if (train.l(n + 1) > 4.0 * (K + c1)) {
      ++out.twist_gates_fired;
      if (train.r(n) > twist_bound + slack) {
        out.violations.push_back({n, "twist-bound", train.r(n), twist_bound});
      }
    }
  }
  const double tail_bound = K * std::exp(K + c1);
  for (int n = 2; n <= train.size(); ++n) {
    if (train.l(n) > 2.0 * K + c1) {
      ++out.tail_gates_fired;
      const TailConstant c2 = tail_constant_c2(spec, n);
      if (c2.value > tail_bound + slack) {
        out.violations.push_back({n, "tail-bound", c2.value, tail_bound});
      }
    }
  }
  return out;
}

}  // namespace trains
