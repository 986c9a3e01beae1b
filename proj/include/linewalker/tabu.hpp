#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "linewalker/extrema.hpp"
#include "linewalker/smoothing.hpp"
#include "linewalker/types.hpp"

namespace linewalker {

/// Short- and long-term tabu memory for one run.
///
/// The short-term list is implicit: a sampled index j blocks its neighborhood
/// |i - j| <= dist_short while (current_iter - iter_found[j]) <= tenure.
/// Long-term membership never expires; its per-sample radius dist_long[j] is
/// recomputed every iteration from the current fit.
template <class Scalar = double>
struct TabuState {
  int tenure = 5;
  GridIndex dist_short = 1;
  Scalar nu_min = Scalar(0.10);
  Scalar nu_max = Scalar(0.25);
  int current_iter = 0;
  std::map<GridIndex, int> iter_found;
  std::map<GridIndex, GridIndex> dist_long;
  /// Sample evaluated in the previous iteration that became the incumbent
  /// minimum, if any, and by how much it improved the incumbent.
  std::optional<GridIndex> prev_new_min;
  Scalar prev_improvement = Scalar(0);
};

namespace detail {

inline GridIndex ceil_positive(double v) {
  return static_cast<GridIndex>(std::ceil(v));
}

}  // namespace detail

/// dist_short = ceil(N / (2 E_total)); a radius of zero would make every
/// point immediately non-tabu, so thresholds round up.
template <class Scalar = double>
TabuState<Scalar> make_tabu_state(GridIndex n_points, int e_max_total,
                                  int tenure_init = 5,
                                  Scalar nu_min = Scalar(0.10),
                                  Scalar nu_max = Scalar(0.25)) {
  if (tenure_init < 1 || e_max_total < 1 || n_points < 3) {
    throw std::invalid_argument("make_tabu_state: bad parameters");
  }
  TabuState<Scalar> s;
  s.tenure = tenure_init;
  s.dist_short = detail::ceil_positive(double(n_points) / (2.0 * e_max_total));
  s.nu_min = nu_min;
  s.nu_max = nu_max;
  return s;
}

/// kappa in [0, 1]: 0 at the fit's extremes, 1 at mid-range. Flat fit -> 0.
template <class Scalar>
Scalar tabu_kappa(const Fit<Scalar>& fit, Scalar value) {
  const Scalar range = fit.range();
  if (range == Scalar(0)) return Scalar(0);
  const Scalar mid = range / Scalar(2);
  const Scalar k =
      std::min(fit.max_value() - value, value - fit.min_value()) / mid;
  return std::clamp(k, Scalar(0), Scalar(1));
}

/// Long-term radius nu_i * N / |S| (rounded up) for a point whose fit value
/// is `value`, given the current sample count.
template <class Scalar>
GridIndex long_term_radius(const TabuState<Scalar>& state,
                           const Fit<Scalar>& fit, Scalar value,
                           GridIndex sample_count) {
  const Scalar nu =
      state.nu_min + tabu_kappa(fit, value) * (state.nu_max - state.nu_min);
  return detail::ceil_positive(double(nu) * double(fit.size()) /
                               double(sample_count));
}

/// Tenure update plus per-sample long-term radii:
///   eta > T        -> T + 1
///   eta < T - 1    -> T - 1 (kept >= 1)
/// then dist_long[i] = ceil(nu_i N / |S|) for every sampled i.
template <class Scalar>
void manage_tabu_struct(TabuState<Scalar>& state, const Fit<Scalar>& fit,
                        const SmoothingSystem<Scalar>& system,
                        Scalar delta_min, Scalar delta_max) {
  if (system.sample_count() == 0) {
    throw std::invalid_argument("manage_tabu_struct: no samples");
  }
  const int eta = count_interior_extrema(fit, delta_min, delta_max);
  if (eta > state.tenure) {
    ++state.tenure;
  } else if (eta < state.tenure - 1 && state.tenure > 1) {
    --state.tenure;
  }
  state.dist_long.clear();
  for (GridIndex i : system.sampled_indices()) {
    state.dist_long[i] =
        long_term_radius(state, fit, fit[i], system.sample_count());
  }
}

/// True iff some sample j with unexpired tenure has |i - j| <= dist_short.
template <class Scalar>
bool is_short_term_tabu(const TabuState<Scalar>& state, GridIndex i) {
  for (const auto& [j, found] : state.iter_found) {
    if (state.current_iter - found <= state.tenure &&
        std::abs(i - j) <= state.dist_short) {
      return true;
    }
  }
  return false;
}

/// True iff some sample j has |i - j| <= dist_long[j]. Never expires.
template <class Scalar>
bool is_long_term_tabu(const TabuState<Scalar>& state, GridIndex i) {
  for (const auto& [j, radius] : state.dist_long) {
    if (std::abs(i - j) <= radius) return true;
  }
  return false;
}

/// Aspiration 1 (overrides both lists): the candidate is a potential
/// minimizer and has at most N_max_nbrs sampled neighbors inside its
/// would-be long-term radius. With |S| <= 30 the bar is 1% of the fit range
/// above the incumbent and one neighbor; past 30 samples, 10% and two.
template <class Scalar>
bool aspiration_1(GridIndex candidate, const Fit<Scalar>& fit,
                  const SmoothingSystem<Scalar>& system,
                  const TabuState<Scalar>& state) {
  const GridIndex ns = system.sample_count();
  const Scalar pct = ns <= 30 ? Scalar(0.01) : Scalar(0.10);
  const GridIndex max_nbrs = ns <= 30 ? 1 : 2;
  if (!(fit[candidate] <= system.best_value() + pct * fit.range())) {
    return false;
  }
  const GridIndex radius = long_term_radius(state, fit, fit[candidate], ns);
  GridIndex neighbors = 0;
  for (GridIndex j : system.sampled_indices()) {
    if (std::abs(candidate - j) <= radius) ++neighbors;
  }
  return neighbors <= max_nbrs;
}

/// Aspiration 2 (overrides the short-term list only): the previous iteration
/// produced a new incumbent minimum x_hat, x_hat is the nearest sampled
/// neighbor of the candidate on one side, the candidate lies outside
/// x_hat's long-term neighborhood, and the incumbent improved by at least
/// 1% of the current fit range.
template <class Scalar>
bool aspiration_2(GridIndex candidate, const Fit<Scalar>& fit,
                  const SmoothingSystem<Scalar>& system,
                  const TabuState<Scalar>& state, Scalar prev_improvement) {
  if (!state.prev_new_min.has_value()) return false;
  const GridIndex x_hat = *state.prev_new_min;

  GridIndex left = 0, right = 0;  // nearest sampled neighbors of candidate
  for (GridIndex j : system.sampled_indices()) {
    if (j < candidate) {
      left = j;
    } else if (j > candidate) {
      right = j;
      break;
    }
  }
  if (x_hat != left && x_hat != right) return false;

  const auto it = state.dist_long.find(x_hat);
  const GridIndex radius = it == state.dist_long.end() ? 0 : it->second;
  if (std::abs(candidate - x_hat) <= radius) return false;  // too close

  return prev_improvement >= Scalar(0.01) * fit.range();
}

enum class NonTabuReason { plain, aspiration1, aspiration2 };

struct NonTabuPoint {
  GridIndex index;
  NonTabuReason reason;
};

/// Tabu filter with aspiration overrides. Candidates must be unsampled.
/// A candidate blocked by the long-term list is released only by
/// aspiration 1; aspiration 2 lifts a short-term block alone.
template <class Scalar>
std::vector<NonTabuPoint> classify_non_tabu_points(
    const std::vector<GridIndex>& candidates, const Fit<Scalar>& fit,
    const SmoothingSystem<Scalar>& system, const TabuState<Scalar>& state) {
  std::vector<NonTabuPoint> out;
  for (GridIndex c : candidates) {
    if (system.sampled(c)) {
      throw std::invalid_argument(
          "classify_non_tabu_points: candidate already sampled");
    }
    const bool short_tabu = is_short_term_tabu(state, c);
    const bool long_tabu = is_long_term_tabu(state, c);
    if (!short_tabu && !long_tabu) {
      out.push_back({c, NonTabuReason::plain});
    } else if (aspiration_1(c, fit, system, state)) {
      out.push_back({c, NonTabuReason::aspiration1});
    } else if (short_tabu && !long_tabu &&
               aspiration_2(c, fit, system, state, state.prev_improvement)) {
      out.push_back({c, NonTabuReason::aspiration2});
    }
  }
  return out;
}

template <class Scalar>
std::vector<GridIndex> find_non_tabu_points(
    const std::vector<GridIndex>& candidates, const Fit<Scalar>& fit,
    const SmoothingSystem<Scalar>& system, const TabuState<Scalar>& state) {
  std::vector<GridIndex> out;
  for (const NonTabuPoint& p :
       classify_non_tabu_points(candidates, fit, system, state)) {
    out.push_back(p.index);
  }
  return out;
}

}  // namespace linewalker
