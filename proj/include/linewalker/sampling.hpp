#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "linewalker/smoothing.hpp"
#include "linewalker/types.hpp"

namespace linewalker {

/// Bisect the gap with the most unexplored grid points. Ties go to the gap
/// whose fit values (endpoints included) reach lowest, then to the smallest
/// left endpoint. Requires both segment ends sampled and at least one
/// unsampled index; the returned index is always unsampled.
template <class Scalar>
GridIndex find_largest_unexplored_interval(
    const std::vector<GridIndex>& sampled_sorted, const Fit<Scalar>& fit) {
  if (sampled_sorted.size() < 2 || sampled_sorted.front() != 1 ||
      sampled_sorted.back() != fit.size()) {
    throw std::invalid_argument(
        "find_largest_unexplored_interval: segment ends must be sampled");
  }
  bool found = false;
  GridIndex best_left = 0, best_gap = 0;
  Scalar best_min = Scalar(0);
  for (std::size_t k = 0; k + 1 < sampled_sorted.size(); ++k) {
    const GridIndex i = sampled_sorted[k];
    const GridIndex r = sampled_sorted[k + 1];
    const GridIndex gap = r - i;
    Scalar lo = fit[i];
    for (GridIndex j = i + 1; j <= r; ++j) lo = std::min(lo, fit[j]);
    if (!found || gap > best_gap || (gap == best_gap && lo < best_min)) {
      found = true;
      best_left = i;
      best_gap = gap;
      best_min = lo;
    }
  }
  if (best_gap < 2) {
    throw std::invalid_argument(
        "find_largest_unexplored_interval: every grid point is sampled");
  }
  return best_left + best_gap / 2;
}

/// Move a candidate extremum j toward the sparser side: with L, R the
/// nearest sampled neighbors and M the rounded midpoint of [L, R], pick the
/// index farthest from j within [j, M] (or [M, j]) whose fit value stays
/// within theta * range of the fit value at j. j itself always qualifies,
/// so the result lies strictly between L and R.
template <class Scalar>
GridIndex sample_around_the_bend(GridIndex j, const Fit<Scalar>& fit,
                                 const std::vector<GridIndex>& sampled_sorted,
                                 Scalar theta) {
  if (theta < Scalar(0) || theta > Scalar(1)) {
    throw std::invalid_argument("sample_around_the_bend: theta outside [0,1]");
  }
  const auto pos =
      std::lower_bound(sampled_sorted.begin(), sampled_sorted.end(), j);
  if (pos == sampled_sorted.begin() || pos == sampled_sorted.end() ||
      *pos == j) {
    throw std::invalid_argument(
        "sample_around_the_bend: j must be unsampled with sampled neighbors "
        "on both sides");
  }
  const GridIndex left = *(pos - 1);
  const GridIndex right = *pos;
  const GridIndex mid =
      left + static_cast<GridIndex>(std::llround(double(right - left) / 2.0));
  const Scalar band = theta * fit.range();
  const Scalar fj = fit[j];
  if (right - j >= j - left) {
    for (GridIndex i = mid; i >= j; --i) {
      if (std::abs(fit[i] - fj) <= band) return i;
    }
  } else {
    for (GridIndex i = mid; i <= j; ++i) {
      if (std::abs(fit[i] - fj) <= band) return i;
    }
  }
  return j;
}

/// Ascending by fit value; equal values fall back to ascending index.
template <class Scalar>
std::vector<GridIndex> sort_candidates(std::vector<GridIndex> candidates,
                                       const Fit<Scalar>& fit) {
  std::sort(candidates.begin(), candidates.end(),
            [&fit](GridIndex a, GridIndex b) {
              if (fit[a] != fit[b]) return fit[a] < fit[b];
              return a < b;
            });
  return candidates;
}

}  // namespace linewalker
