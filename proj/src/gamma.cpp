#include "trains/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trains/hyptrig.hpp"
#include "trains/kahan.hpp"
#include "trains/parallel.hpp"

namespace trains {

namespace {

// Relative margin on the early-stop rule. Partial sums are monotone up to
// compensated-summation drift (~n'eps); this margin keeps skipped candidates
// strictly above the running best, so the reported min never changes.
constexpr double kEarlyStopMargin = 1e-9;

constexpr double kGoldenRatio = 0.6180339887498949;

}  // namespace

const char* gamma_kind_name(GammaKind kind) {
  switch (kind) {
    case GammaKind::Full: return "full";
    case GammaKind::Star: return "star";
    case GammaKind::Zero: return "zero";
  }
  return "?";
}

GammaKind gamma_kind_from_name(const std::string& name) {
  if (name == "full") return GammaKind::Full;
  if (name == "star") return GammaKind::Star;
  if (name == "zero") return GammaKind::Zero;
  throw std::invalid_argument("unknown gamma kind '" + name + "'");
}

GammaEngine::GammaEngine(const Train& train, GammaKind kind, double cap)
    : train_(train), kind_(kind), cap_(cap) {
  if (!(cap_ > 0.0)) throw std::invalid_argument("cap must be > 0");
  const int n = train_.size();
  const double neg_inf = -std::numeric_limits<double>::infinity();
  exp_neg_l_.assign(static_cast<std::size_t>(n) + 1, 0.0);
  suffix_min_l_.assign(static_cast<std::size_t>(n) + 2,
                       std::numeric_limits<double>::infinity());
  for (int k = 1; k <= n; ++k) {
    exp_neg_l_[static_cast<std::size_t>(k)] = std::exp(-train_.l(k));
  }
  for (int k = n; k >= 1; --k) {
    suffix_min_l_[static_cast<std::size_t>(k)] =
        std::min(train_.l(k), suffix_min_l_[static_cast<std::size_t>(k) + 1]);
  }
  delta_fast_.assign(static_cast<std::size_t>(n), 0.0);
  half_gap_.assign(static_cast<std::size_t>(n), 0.0);
  excess_.assign(static_cast<std::size_t>(n), 0.0);
  log_excess_.assign(static_cast<std::size_t>(n), neg_inf);
  for (int k = 1; k <= n - 1; ++k) {
    const double lk = train_.l(k), lk1 = train_.l(k + 1), rk = train_.r(k);
    const std::size_t i = static_cast<std::size_t>(k);
    half_gap_[i] = 0.5 * positive_part(lk + lk1 - rk);
    excess_[i] = positive_part(rk - lk - lk1);
    if (excess_[i] > 0.0) log_excess_[i] = std::log(excess_[i]);
    // Fixed association order; min_gamma replays the same additions.
    delta_fast_[i] = ((exp_neg_l_[i] + exp_neg_l_[i + 1]) + std::exp(-half_gap_[i])) + excess_[i];
  }
}

double GammaEngine::delta(int k) const {
  if (k < 1 || k > train_.size() - 1) throw std::out_of_range("delta index outside [1, n_max-1]");
  return delta_fast_[static_cast<std::size_t>(k)];
}

Window GammaEngine::window_indices(int n, double h) const {
  if (n < 1 || n > train_.size()) throw std::out_of_range("n outside [1, n_max]");
  if (!(h >= 0.0) || h > train_.l(n)) throw std::domain_error("h outside [0, l_n]");
  Window w;
  w.a = 1;
  for (int m = n - 1; m >= 1; --m) {
    if (train_.l(m) <= h) {
      w.a = m;
      break;
    }
  }
  w.b = std::numeric_limits<int>::max();
  w.b_unbounded = true;
  for (int m = n + 1; m <= train_.size(); ++m) {
    if (train_.l(m) <= h) {
      w.b = m;
      w.b_unbounded = false;
      break;
    }
  }
  return w;
}

double GammaEngine::slow_full_term(int k, double h) const {
  const std::size_t i = static_cast<std::size_t>(k);
  const double t4 = excess_[i] > 0.0 ? std::exp(h + log_excess_[i]) : 0.0;
  return ((std::exp(h - train_.l(k)) + std::exp(h - train_.l(k + 1))) +
          std::exp(h - half_gap_[i])) +
         t4;
}

double GammaEngine::clip(double v) const { return v < cap_ ? v : cap_; }

// Visits m = n-1, n-2, ..., m_lo with the case value at each m.
// visit(m, value, future_lower_bound) -> bool keep_scanning.
template <typename Visit>
void GammaEngine::scan_down(int n, double h, int m_lo, Visit&& visit) const {
  if (m_lo > n - 1) return;
  const double E = std::exp(h);
  const bool slow = std::isinf(E);
  if (kind_ == GammaKind::Full) {
    double acc = 0.0;  // plain sum: keeps every value monotone in r
    for (int m = n - 1; m >= m_lo; --m) {
      const double term =
          slow ? slow_full_term(m, h) : delta_fast_[static_cast<std::size_t>(m)];
      double v;
      if (train_.l(m) <= h) {
        const double scaled = slow ? acc : E * acc;
        v = positive_part(train_.r(m) + h - train_.l(m + 1)) + scaled;
      } else {
        const double with_m = acc + term;
        v = (train_.l(m) - h) + (slow ? with_m : E * with_m);
      }
      acc += term;
      const double lb = slow ? acc : E * acc;
      if (!visit(m, v, lb)) return;
    }
  } else {
    KahanSum acc;  // sums of e^{h-l_k}: compensated (long tails of tiny terms)
    acc.add(slow ? std::exp(h - train_.l(n)) : exp_neg_l_[static_cast<std::size_t>(n)]);
    for (int m = n - 1; m >= m_lo; --m) {
      const double term =
          slow ? std::exp(h - train_.l(m)) : exp_neg_l_[static_cast<std::size_t>(m)];
      double v;
      if (train_.l(m) <= h) {
        const double scaled = slow ? acc.value() : E * acc.value();
        v = kind_ == GammaKind::Zero
                ? scaled
                : positive_part(train_.r(m) + h - train_.l(m + 1)) + scaled;
      } else {
        const double with_m = acc.value_plus(term);
        v = (train_.l(m) - h) + (slow ? with_m : E * with_m);
      }
      acc.add(term);
      const double lb = slow ? acc.value() : E * acc.value();
      if (!visit(m, v, lb)) return;
    }
  }
}

// Visits m = n+1, ..., m_hi. Same contract as scan_down.
template <typename Visit>
void GammaEngine::scan_up(int n, double h, int m_hi, Visit&& visit) const {
  if (m_hi < n + 1) return;
  const double E = std::exp(h);
  const bool slow = std::isinf(E);
  if (kind_ == GammaKind::Full) {
    double acc = 0.0;  // Sigma_{k=n}^{m-2} at the top of each iteration
    for (int m = n + 1; m <= m_hi; ++m) {
      const double term = slow ? slow_full_term(m - 1, h)
                               : delta_fast_[static_cast<std::size_t>(m - 1)];
      double v;
      if (train_.l(m) <= h) {
        const double scaled = slow ? acc : E * acc;
        v = positive_part(train_.r(m - 1) + h - train_.l(m - 1)) + scaled;
      } else {
        const double with = acc + term;
        v = (train_.l(m) - h) + (slow ? with : E * with);
      }
      acc += term;
      const double lb = slow ? acc : E * acc;
      if (!visit(m, v, lb)) return;
    }
  } else {
    KahanSum acc;  // Sigma_{k=n}^{m-1} at the top of each iteration
    acc.add(slow ? std::exp(h - train_.l(n)) : exp_neg_l_[static_cast<std::size_t>(n)]);
    for (int m = n + 1; m <= m_hi; ++m) {
      const double term =
          slow ? std::exp(h - train_.l(m)) : exp_neg_l_[static_cast<std::size_t>(m)];
      double v;
      if (train_.l(m) <= h) {
        const double scaled = slow ? acc.value() : E * acc.value();
        v = kind_ == GammaKind::Zero
                ? scaled
                : positive_part(train_.r(m - 1) + h - train_.l(m - 1)) + scaled;
      } else {
        const double with = acc.value_plus(term);
        v = (train_.l(m) - h) + (slow ? with : E * with);
      }
      acc.add(term);
      const double lb = slow ? acc.value() : E * acc.value();
      if (!visit(m, v, lb)) return;
    }
  }
}

double GammaEngine::gamma(int n, int m, double h) const {
  const int N = train_.size();
  if (n < 1 || n > N || m < 1 || m > N) throw std::out_of_range("index outside [1, n_max]");
  if (!(h >= 0.0) || h > train_.l(n)) throw std::domain_error("h outside [0, l_n]");
  if (m == n) return clip(std::min(h, train_.l(n) - h));
  double out = std::numeric_limits<double>::quiet_NaN();
  auto catch_m = [&](int mm, double v, double) {
    if (mm == m) {
      out = v;
      return false;
    }
    return true;
  };
  if (m < n) {
    scan_down(n, h, m, catch_m);
  } else {
    scan_up(n, h, m, catch_m);
  }
  return clip(out);
}

MinGammaResult GammaEngine::min_gamma(int n, double h) const {
  const int N = train_.size();
  if (n < 1 || n > N) throw std::out_of_range("n outside [1, n_max]");
  if (!(h >= 0.0) || h > train_.l(n)) throw std::domain_error("h outside [0, l_n]");

  MinGammaResult best;
  best.value = clip(std::min(h, train_.l(n) - h));
  best.argmin = n;

  const Window w = window_indices(n, h);

  // Downward: later visits are smaller m, so ties move the witness down.
  scan_down(n, h, w.a, [&](int m, double v, double lb) {
    v = clip(v);
    if (v <= best.value) {
      best.value = v;
      best.argmin = m;
    }
    return !(lb > best.value * (1.0 + kEarlyStopMargin));
  });

  // Upward: skipped entirely when no m >= n can undercut the m = n case.
  const bool tail_dominates = suffix_min_l_[static_cast<std::size_t>(n)] >= train_.l(n);
  if (!tail_dominates) {
    const int m_hi = w.b_unbounded ? N : w.b;
    scan_up(n, h, m_hi, [&](int m, double v, double lb) {
      v = clip(v);
      if (v < best.value) {
        best.value = v;
        best.argmin = m;
      }
      return !(lb > best.value * (1.0 + kEarlyStopMargin));
    });
  }

  best.saturated = best.value >= cap_;
  return best;
}

std::vector<double> GammaEngine::sup_candidates(int n, int grid, double h_floor) const {
  const int N = train_.size();
  if (n < 1 || n > N) throw std::out_of_range("n outside [1, n_max]");
  const double ln = train_.l(n);
  if (!(h_floor >= 0.0) || h_floor > ln) throw std::domain_error("h_floor outside [0, l_n]");
  if (grid < 1) throw std::invalid_argument("grid must be >= 1");

  std::vector<double> cands;
  cands.reserve(static_cast<std::size_t>(grid + 2 * N + 4));
  if (grid == 1) {
    cands.push_back(0.5 * (h_floor + ln));
  } else {
    const double span = ln - h_floor;
    for (int i = 0; i < grid; ++i) {
      cands.push_back(h_floor + span * static_cast<double>(i) / (grid - 1));
    }
  }
  cands.push_back(h_floor);
  cands.push_back(ln);
  const double mid = 0.5 * ln;
  if (mid >= h_floor) cands.push_back(mid);
  for (int m = 1; m <= N; ++m) {
    const double lm = train_.l(m);
    if (lm >= h_floor && lm <= ln) {
      cands.push_back(lm);
      // the min can jump down when the case flips at l_m; probe the left limit
      const double before = std::nextafter(lm, -std::numeric_limits<double>::infinity());
      if (before >= h_floor) cands.push_back(before);
    }
  }
  for (int m = 1; m <= N - 1; ++m) {
    const double kink = train_.l(m + 1) - train_.r(m);
    if (kink >= h_floor && kink <= ln) cands.push_back(kink);
  }
  for (double& h : cands) h = std::clamp(h, h_floor, ln);  // grid arithmetic can slip an ulp
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  return cands;
}

SupResult GammaEngine::sup_over_h(int n, int grid, double h_floor, bool with_profile,
                                  bool refine) const {
  const std::vector<double> cands = sup_candidates(n, grid, h_floor);
  SupResult res;
  res.sup = -1.0;
  std::size_t best_idx = 0;
  auto probe = [&](double h) {
    const MinGammaResult mg = min_gamma(n, h);
    if (with_profile) res.profile.push_back({h, mg.value, mg.argmin});
    return mg;
  };
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const MinGammaResult mg = probe(cands[i]);
    if (mg.value > res.sup) {
      res.sup = mg.value;
      res.h_star = cands[i];
      res.m_star = mg.argmin;
      best_idx = i;
    }
  }
  if (refine && cands.size() >= 2) {
    // One golden-section pass on the bracket around the best candidate.
    double lo = cands[best_idx == 0 ? 0 : best_idx - 1];
    double hi = cands[std::min(best_idx + 1, cands.size() - 1)];
    if (hi > lo) {
      double x1 = hi - kGoldenRatio * (hi - lo);
      double x2 = lo + kGoldenRatio * (hi - lo);
      MinGammaResult f1 = probe(x1);
      MinGammaResult f2 = probe(x2);
      auto consider = [&](double h, const MinGammaResult& mg) {
        if (mg.value > res.sup) {
          res.sup = mg.value;
          res.h_star = h;
          res.m_star = mg.argmin;
        }
      };
      consider(x1, f1);
      consider(x2, f2);
      const double tol = 1e-12 * std::max(1.0, train_.l(n));
      for (int it = 0; it < 64 && (hi - lo) > tol; ++it) {
        if (f1.value < f2.value) {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + kGoldenRatio * (hi - lo);
          f2 = probe(x2);
          consider(x2, f2);
        } else {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - kGoldenRatio * (hi - lo);
          f1 = probe(x1);
          consider(x1, f1);
        }
      }
    }
  }
  if (with_profile) {
    std::sort(res.profile.begin(), res.profile.end(),
              [](const HProbe& p, const HProbe& q) { return p.h < q.h; });
    res.profile.erase(std::unique(res.profile.begin(), res.profile.end(),
                                  [](const HProbe& p, const HProbe& q) { return p.h == q.h; }),
                      res.profile.end());
  }
  res.saturated = res.sup >= cap_;
  return res;
}

namespace {

KEstimate reduce_sups(const GammaEngine& eng, const std::vector<SupResult>& sups, int n_limit,
                      int grid, double h_floor) {
  KEstimate est;
  est.kind = eng.kind();
  est.n_max = n_limit;
  est.h_grid = grid;
  est.h_floor = h_floor;
  est.cap = eng.cap();
  est.value = -1.0;
  const int step = std::max(1, (n_limit + 7) / 8);
  std::vector<int> checkpoints;
  for (int j = step; j < n_limit; j += step) checkpoints.push_back(j);
  checkpoints.push_back(n_limit);
  std::size_t next_cp = 0;
  double running = -1.0;
  for (int n = 1; n <= n_limit; ++n) {
    const SupResult& s = sups[static_cast<std::size_t>(n - 1)];
    if (s.sup > running) running = s.sup;
    if (s.sup > est.value) {
      est.value = s.sup;
      est.witness_n = n;
      est.witness_h = s.h_star;
      est.witness_m = s.m_star;
    }
    while (next_cp < checkpoints.size() && n == checkpoints[next_cp]) {
      est.trajectory.emplace_back(n, std::max(running, 0.0));
      ++next_cp;
    }
  }
  est.value = std::max(est.value, 0.0);
  est.saturated = est.value >= eng.cap();
  return est;
}

}  // namespace

KEstimate GammaEngine::k_estimate(int n_limit, int grid, double h_floor, int jobs) const {
  if (n_limit < 1 || n_limit > train_.size()) {
    throw std::out_of_range("n_limit outside [1, n_max]");
  }
  std::vector<SupResult> sups(static_cast<std::size_t>(n_limit));
  parallel_for(1, n_limit + 1, jobs, [&](int n) {
    if (train_.l(n) < h_floor) {
      // Remark-(3) functional: [h_floor, l_n] is empty, n contributes nothing.
      sups[static_cast<std::size_t>(n - 1)] = SupResult{0.0, h_floor, n, false, {}};
      return;
    }
    sups[static_cast<std::size_t>(n - 1)] = sup_over_h(n, grid, h_floor);
  });
  return reduce_sups(*this, sups, n_limit, grid, h_floor);
}

KEstimate GammaEngine::k_estimate_fixed(const std::vector<std::vector<double>>& candidates,
                                        int jobs) const {
  const int n_limit = static_cast<int>(candidates.size());
  if (n_limit < 1 || n_limit > train_.size()) {
    throw std::out_of_range("candidate rows outside [1, n_max]");
  }
  std::vector<SupResult> sups(static_cast<std::size_t>(n_limit));
  parallel_for(1, n_limit + 1, jobs, [&](int n) {
    SupResult res;
    res.sup = 0.0;
    res.h_star = 0.0;
    res.m_star = n;
    for (const double h : candidates[static_cast<std::size_t>(n - 1)]) {
      if (!(h >= 0.0) || h > train_.l(n)) continue;
      const MinGammaResult mg = min_gamma(n, h);
      if (mg.value > res.sup) {
        res.sup = mg.value;
        res.h_star = h;
        res.m_star = mg.argmin;
      }
    }
    res.saturated = res.sup >= cap_;
    sups[static_cast<std::size_t>(n - 1)] = res;
  });
  return reduce_sups(*this, sups, n_limit, 0, 0.0);
}

}  // namespace trains
