#pragma once

#include <cmath>

namespace trains {

/// Compensated (Kahan) accumulator for long sums of small positive terms.
/// Overflow to +inf is sticky; the compensation term is dropped so that no
/// NaN can leak out of an inf - inf.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    if (std::isinf(sum)) return;
    const double y = x - comp;
    const double t = sum + y;
    if (std::isinf(t)) {
      sum = t;
      comp = 0.0;
      return;
    }
    comp = (t - sum) - y;
    sum = t;
  }

  double value() const { return sum; }

  /// Value this accumulator would report after add(x), without mutating.
  double value_plus(double x) const {
    KahanSum k = *this;
    k.add(x);
    return k.value();
  }
};

}  // namespace trains
