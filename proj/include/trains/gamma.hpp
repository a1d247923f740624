#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "trains/families.hpp"

namespace trains {

/// The three window functionals: Full keeps all four terms of the distance
/// proxy Delta(k); Star replaces Delta(k) by e^{-l_k} inside the sums; Zero
/// additionally drops the boundary positive-part terms (valid when {r_n} is
/// bounded; every flute surface qualifies). Zero's definition only prints the
/// two cases with l_m <= h, m != n; in every remaining case it falls back to
/// the Star value. Note the sum limits: Full sums run to n - 1, Star/Zero
/// sums to n, exactly as defined.
enum class GammaKind { Full, Star, Zero };

const char* gamma_kind_name(GammaKind kind);
GammaKind gamma_kind_from_name(const std::string& name);

/// Scan window around n at height h. `a` is the nearest index below n whose
/// l-value drops to <= h (1 when there is none); `b` the nearest above
/// (unbounded when none exists within the horizon).
struct Window {
  int a = 1;
  int b = std::numeric_limits<int>::max();
  bool b_unbounded = true;
};

struct MinGammaResult {
  double value = 0.0;
  int argmin = 0;
  bool saturated = false;
};

struct HProbe {
  double h = 0.0;
  double value = 0.0;
  int argmin = 0;
};

struct SupResult {
  double sup = 0.0;
  double h_star = 0.0;
  int m_star = 0;
  bool saturated = false;
  std::vector<HProbe> profile;  // filled only when requested
};

/// Truncated estimate of K = sup_n sup_h min_m Gamma_{nm}(h).
struct KEstimate {
  GammaKind kind = GammaKind::Full;
  double value = 0.0;
  int witness_n = 0;
  double witness_h = 0.0;
  int witness_m = 0;
  int n_max = 0;
  int h_grid = 0;
  double h_floor = 0.0;
  double cap = 0.0;
  bool saturated = false;
  std::vector<std::pair<int, double>> trajectory;  // (N, K_N) checkpoints
};

inline constexpr double kDefaultCap = 1e12;
inline constexpr int kDefaultGrid = 256;

/// Evaluator for one train and one functional kind. All methods are pure and
/// safe to call concurrently; values above `cap` are reported as `cap`
/// ("saturated"), which already certifies "large" for classification.
class GammaEngine {
 public:
  GammaEngine(const Train& train, GammaKind kind, double cap = kDefaultCap);

  const Train& train() const { return train_; }
  GammaKind kind() const { return kind_; }
  double cap() const { return cap_; }

  /// Delta(k) = e^{-l_k} + e^{-l_{k+1}} + e^{-(l_k+l_{k+1}-r_k)_+ / 2}
///            + (r_k - l_k - l_{k+1})_+ ; requires 1 <= k <= n_max - 1.
  double delta(int k) const;

  /// A_n(h), B_n(h); requires 0 <= h <= l_n.
  Window window_indices(int n, double h) const;

  /// Gamma_{nm}(h) for this kind, evaluated exactly as the five-case
  /// definition prints it (case selection uses non-strict l_m <= h).
  double gamma(int n, int m, double h) const;

  /// min over m in [A_n(h), min(B_n(h), n_max)] with smallest-m tie break.
  /// When l_m >= l_n for every m >= n within the horizon, candidates above n
  /// cannot beat the m = n case and the upward scan is skipped; unbounded
  /// upward scans stop once the accumulated e^h-weighted partial sum alone
  /// exceeds the current best (every later candidate dominates it).
  MinGammaResult min_gamma(int n, double h) const;

  /// Deterministic h-candidate set: uniform grid on [h_floor, l_n] plus the
  /// case breakpoints {l_m}, the kink points {l_{m+1} - r_m}, and l_n / 2.
  std::vector<double> sup_candidates(int n, int grid, double h_floor) const;

  /// Largest min_gamma over the candidate set, then one golden-section
  /// refinement pass around the best candidate.
  SupResult sup_over_h(int n, int grid, double h_floor, bool with_profile = false,
                       bool refine = true) const;

  /// K_N = max over n <= n_limit of sup_over_h. Deterministic for any worker
  /// count (per-n results are combined by a sequential max-reduce with
  /// smallest-n tie break).
  KEstimate k_estimate(int n_limit, int grid = kDefaultGrid, double h_floor = 0.0,
                       int jobs = 1) const;

  /// Same reduction over caller-supplied h sets (candidates[n-1] for row n).
  /// This is the comparison path used whenever two trains must be measured
  /// on identical grids.
  KEstimate k_estimate_fixed(const std::vector<std::vector<double>>& candidates,
                             int jobs = 1) const;

 private:
  template <typename Visit>
  void scan_down(int n, double h, int m_lo, Visit&& visit) const;
  template <typename Visit>
  void scan_up(int n, double h, int m_hi, Visit&& visit) const;

  double slow_full_term(int k, double h) const;
  double clip(double v) const;

  Train train_;
  GammaKind kind_;
  double cap_;
  std::vector<double> exp_neg_l_;   // e^{-l_k}
  std::vector<double> delta_fast_;  // Delta(k) assembled in a fixed order
  std::vector<double> half_gap_;    // (l_k + l_{k+1} - r_k)_+ / 2
  std::vector<double> excess_;      // (r_k - l_k - l_{k+1})_+
  std::vector<double> log_excess_;  // log of the above (or -inf)
  std::vector<double> suffix_min_l_;
};

}  // namespace trains
