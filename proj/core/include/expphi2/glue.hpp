#pragma once

#include <cmath>

namespace expphi2 {

// One smooth glue shared repo-wide: g(x) = exp(-1/x) for x > 0, else 0.
inline double glue(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

/// C-infinity ramp, 1 for t <= 0, 0 for t >= 1, strictly decreasing between.
inline double ramp_down(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = glue(1.0 - t);
  const double b = glue(t);
  return a / (a + b);
}

}  // namespace expphi2
