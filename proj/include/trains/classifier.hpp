#pragma once

#include <map>
#include <string>
#include <vector>

#include "trains/families.hpp"
#include "trains/gamma.hpp"

namespace trains {

/// Classification outcome. Everything here is desk-scale evidence over a
/// finite horizon; verdicts always carry truncation caveats in diagnostics.
struct Verdict {
  enum class Outcome { Hyperbolic, NotHyperbolic, Inconclusive };
  Outcome outcome = Outcome::Inconclusive;
  std::string pathway;  // rule id, e.g. "bounded-lengths"
  std::map<std::string, double> constants;
  std::vector<std::string> diagnostics;
};

const char* verdict_outcome_name(Verdict::Outcome o);

/// Thresholds of the trend tests. Values are pinned here, not calibrated at
/// run time.
struct ClassifyOptions {
  /// Fitted growth of l over the trailing half of the horizon below which the
  /// sequence is treated as bounded.
  double growth_threshold = 0.5;
  /// Tail-sum constants c2 measured two doublings apart must grow by more
  /// than this factor to flag divergence of the tail condition.
  double tail_ratio_threshold = 1.5;
  /// Relative K_N increase over the last two checkpoints above which a
  /// Hyperbolic verdict is downgraded.
  double plateau_rel_tol = 0.01;
  /// Fitted growth of r over the trailing half above which {r_n} counts as
  /// unbounded (given its minimum also drifts up).
  double r_growth_threshold = 0.5;
};

/// Smallest c1 with l_m <= l_n + c1 for all m <= n within the horizon
/// (0 for non-decreasing sequences), with a maximizing pair (m, n).
struct QuasiIncreasing {
  double c1 = 0.0;
  int witness_m = 0;
  int witness_n = 0;
};
QuasiIncreasing quasi_increasing_c1(const Train& train);

/// e^{l_n} * Sigma_{k>=n} e^{-l_k}, summed over the horizon and extended past
/// it for closed-form families with a monotone divergent tail, until the
/// doubling-block remainder bound drops below 1e-9 relative. `certified`
/// reports whether that bound was reached.
struct TailConstant {
  double value = 0.0;
  bool certified = false;
  long long terms = 0;
};
TailConstant tail_constant_c2(const TrainSpec& spec, int n);

/// Decision tree over trend tests, the tail condition, and the K_N
/// trajectory cross-check (a Hyperbolic verdict needs a plateauing
/// trajectory, NotHyperbolic a strictly increasing one; a mismatch
/// downgrades to Inconclusive).
Verdict classify(const TrainSpec& spec, const KEstimate& k_est,
                 const ClassifyOptions& options = {});

/// Statement-level checks of the two necessary conditions, with K taken from
/// the estimate: where l_{n+1} > 4(K + c1), r_n must satisfy the twist bound
/// 2 max{K,1} + 2 log max{K,1} + 3 c1; where l_n > 2K + c1, the tail constant
/// must satisfy c2(n) <= K e^{K + c1}. An empty violation list is consistency
/// evidence; violations on a train believed hyperbolic signal a bug or an
/// under-resolved K.
struct NecessaryChecks {
  struct Violation {
    int n = 0;
    std::string check;
    double lhs = 0.0;
    double rhs = 0.0;
  };
  std::vector<Violation> violations;
  int twist_gates_fired = 0;
  int tail_gates_fired = 0;
};
NecessaryChecks necessary_checks(const TrainSpec& spec, const KEstimate& k_est, double c1);

}  // namespace trains
