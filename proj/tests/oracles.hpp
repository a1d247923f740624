#pragma once

// Test-only oracles, kept independent of the engine paths they check.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "trains/families.hpp"
#include "trains/gamma.hpp"
#include "trains/rng.hpp"

namespace oracles {

inline double pos(double x) { return x > 0.0 ? x : 0.0; }

/// Longhand Delta(k), straight from its four-term definition.
inline double delta(double lk, double lk1, double rk) {
  return std::exp(-lk) + std::exp(-lk1) + std::exp(-0.5 * pos(lk + lk1 - rk)) +
         pos(rk - lk - lk1);
}

/// Longhand five-case Gamma for all three kinds, summing naively (plain
/// left-to-right) over the printed ranges. Used for frozen expected values;
/// not bit-identical to the engine, only close.
inline double gamma_longhand(const trains::Train& t, trains::GammaKind kind, int n, int m,
                             double h) {
  using trains::GammaKind;
  if (m == n) return std::min(h, t.l(n) - h);
  const double E = std::exp(h);
  auto delta_sum = [&](int lo, int hi) {
    double s = 0.0;
    for (int k = lo; k <= hi; ++k) s += delta(t.l(k), t.l(k + 1), t.r(k));
    return s;
  };
  auto exp_sum = [&](int lo, int hi) {
    double s = 0.0;
    for (int k = lo; k <= hi; ++k) s += std::exp(-t.l(k));
    return s;
  };
  if (kind == GammaKind::Full) {
    if (m < n && t.l(m) <= h) return pos(t.r(m) + h - t.l(m + 1)) + E * delta_sum(m + 1, n - 1);
    if (m < n) return t.l(m) - h + E * delta_sum(m, n - 1);
    if (t.l(m) > h) return t.l(m) - h + E * delta_sum(n, m - 1);
    return pos(t.r(m - 1) + h - t.l(m - 1)) + E * delta_sum(n, m - 2);
  }
  if (kind == GammaKind::Star) {
    if (m < n && t.l(m) <= h) return pos(t.r(m) + h - t.l(m + 1)) + E * exp_sum(m + 1, n);
    if (m < n) return t.l(m) - h + E * exp_sum(m, n);
    if (t.l(m) > h) return t.l(m) - h + E * exp_sum(n, m);
    return pos(t.r(m - 1) + h - t.l(m - 1)) + E * exp_sum(n, m - 1);
  }
  // Zero: the two explicit cases, Star everywhere else.
  if (m < n && t.l(m) <= h) return E * exp_sum(m + 1, n);
  if (m > n && t.l(m) <= h) return E * exp_sum(n, m - 1);
  return gamma_longhand(t, GammaKind::Star, n, m, h);
}

/// Enumerates min over every m in [1, n_max] through the engine's own
/// gamma(); the window-equivalence checks compare this against min_gamma.
inline std::pair<double, int> brute_min(const trains::GammaEngine& eng, int n, double h) {
  double best = std::numeric_limits<double>::infinity();
  int arg = 0;
  for (int m = 1; m <= eng.train().size(); ++m) {
    const double v = eng.gamma(n, m, h);
    if (v < best) {
      best = v;
      arg = m;
    }
  }
  return {best, arg};
}

/// Dense uniform-grid sup of min_gamma; the independent route for sup checks.
inline double dense_sup(const trains::GammaEngine& eng, int n, int points) {
  const double ln = eng.train().l(n);
  double best = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double h = std::min(ln, ln * static_cast<double>(i) / points);
    best = std::max(best, eng.min_gamma(n, h).value);
  }
  return best;
}

/// Random train generator with moderate ranges (margins stay far above ulp
/// scale, which the exact window-equivalence assertions rely on).
inline trains::Train random_train(trains::SplitMix64& rng, int n_max, double l_lo = 0.1,
                                  double l_hi = 6.0, double r_hi = 4.0, bool flute = false) {
  std::vector<double> l, r;
  for (int i = 0; i < n_max; ++i) {
    l.push_back(rng.uniform(l_lo, l_hi));
    r.push_back(flute ? 0.0 : rng.uniform(0.0, r_hi));
  }
  return trains::Train(l, r);
}

}  // namespace oracles
