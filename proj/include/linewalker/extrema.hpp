#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "linewalker/smoothing.hpp"
#include "linewalker/types.hpp"

namespace linewalker {

/// Strict interior extrema of a fit, 1-based ascending indices.
/// maxima and minima are disjoint by construction.
struct ExtremaSets {
  std::vector<GridIndex> maxima;
  std::vector<GridIndex> minima;

  std::size_t count() const { return maxima.size() + minima.size(); }
};

/// Interior indices i (2 <= i <= n-1) with
///   f_i > max(f_{i-1}, f_{i+1}) + delta_max   (maxima)
///   f_i < min(f_{i-1}, f_{i+1}) - delta_min   (minima).
template <class Scalar>
ExtremaSets detect_extrema(const Fit<Scalar>& fit, Scalar delta_min,
                           Scalar delta_max) {
  if (fit.size() < 3) {
    throw std::invalid_argument("detect_extrema: fit too short");
  }
  if (delta_min < Scalar(0) || delta_max < Scalar(0)) {
    throw std::invalid_argument("detect_extrema: tolerances must be >= 0");
  }
  const Vector<Scalar>& f = fit.values();
  ExtremaSets out;
  for (GridIndex i = 1; i + 1 < fit.size(); ++i) {
    const Scalar lo = std::min(f[i - 1], f[i + 1]);
    const Scalar hi = std::max(f[i - 1], f[i + 1]);
    if (f[i] > hi + delta_max) {
      out.maxima.push_back(i + 1);
    } else if (f[i] < lo - delta_min) {
      out.minima.push_back(i + 1);
    }
  }
  return out;
}

/// eta: number of non-boundary extrema under the same tolerances as
/// detect_extrema.
template <class Scalar>
int count_interior_extrema(const Fit<Scalar>& fit, Scalar delta_min,
                           Scalar delta_max) {
  return static_cast<int>(detect_extrema(fit, delta_min, delta_max).count());
}

}  // namespace linewalker
