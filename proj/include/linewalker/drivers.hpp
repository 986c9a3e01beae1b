#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "linewalker/extrema.hpp"
#include "linewalker/grid.hpp"
#include "linewalker/sampling.hpp"
#include "linewalker/smoothing.hpp"
#include "linewalker/tabu.hpp"
#include "linewalker/types.hpp"

namespace linewalker {

/// Parameters shared by all drivers. Defaults follow the benchmark setup:
/// budget 50, one evaluation per iteration, 5000-point grid, alpha = 0,
/// mu = 0.01, 11 uniform initial samples.
struct RunConfig {
  int n_points = 5000;
  int e_max_total = 50;
  int e_max_itr = 1;
  double alpha = 0.0;
  double mu = 0.01;
  double e_min = 1e-3;
  int initial_sample_count = 11;
  double theta = 0.01;
  double nu_min = 0.10;
  double nu_max = 0.25;
  int tenure_init = 5;
  bool record_snapshots = false;

  void validate() const {
    if (n_points < 3) throw std::invalid_argument("config: n_points < 3");
    if (initial_sample_count < 2) {
      throw std::invalid_argument("config: need at least 2 initial samples");
    }
    if (n_points < initial_sample_count) {
      throw std::invalid_argument("config: grid smaller than initial sample set");
    }
    if (e_max_total < initial_sample_count) {
      throw std::invalid_argument("config: budget below initial sample count");
    }
    if (e_max_itr < 1) throw std::invalid_argument("config: e_max_itr < 1");
    if (alpha < 0 || mu < 0) {
      throw std::invalid_argument("config: negative smoothing weight");
    }
    if (!(e_min > 0)) throw std::invalid_argument("config: e_min must be > 0");
    if (theta < 0 || theta > 1) {
      throw std::invalid_argument("config: theta outside [0,1]");
    }
    if (nu_min < 0 || nu_max > 1 || nu_min > nu_max) {
      throw std::invalid_argument("config: bad nu range");
    }
    if (tenure_init < 1) throw std::invalid_argument("config: tenure_init < 1");
  }
};

enum class Algorithm { full, pure, hunter };

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::full: return "full";
    case Algorithm::pure: return "pure";
    case Algorithm::hunter: return "hunter";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "full") return Algorithm::full;
  if (s == "pure") return Algorithm::pure;
  if (s == "hunter") return Algorithm::hunter;
  throw std::invalid_argument("unknown algorithm: " + s);
}

enum class EvalReason {
  initial,
  extremum,
  aspiration1,
  aspiration2,
  exploration,
  bend
};

inline const char* reason_name(EvalReason r) {
  switch (r) {
    case EvalReason::initial: return "initial";
    case EvalReason::extremum: return "extremum";
    case EvalReason::aspiration1: return "aspiration1";
    case EvalReason::aspiration2: return "aspiration2";
    case EvalReason::exploration: return "exploration";
    case EvalReason::bend: return "bend";
  }
  return "?";
}

inline EvalReason parse_reason(const std::string& s) {
  for (EvalReason r : {EvalReason::initial, EvalReason::extremum,
                       EvalReason::aspiration1, EvalReason::aspiration2,
                       EvalReason::exploration, EvalReason::bend}) {
    if (s == reason_name(r)) return r;
  }
  throw std::invalid_argument("unknown evaluation reason: " + s);
}

struct Evaluation {
  GridIndex index = 0;   // evaluated grid index, 1-based
  int iteration = 0;     // 0 for the initial design
  double value = 0.0;    // true function value
  EvalReason reason = EvalReason::initial;
  GridIndex candidate = 0;  // pre-bend candidate index (== index if unmoved)

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

struct IncumbentRecord {
  int eval_count = 0;
  double best_value = 0.0;

  friend bool operator==(const IncumbentRecord&, const IncumbentRecord&) = default;
};

/// Ordered record of one run: every evaluation with its reason, the
/// incumbent curve, optional per-iteration fit snapshots, and the fit built
/// from the complete sample set.
struct RunTrace {
  std::vector<Evaluation> evaluations;
  std::vector<IncumbentRecord> incumbents;
  std::vector<Fit<double>> fit_snapshots;
  Fit<double> final_fit;
  int iterations = 0;
  GridIndex best_index = 0;
  double best_value = std::numeric_limits<double>::infinity();

  int eval_count() const { return static_cast<int>(evaluations.size()); }
};

/// Objective over grid points (the full D-vector, not the parameter).
using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Objective evaluation failed; `partial` holds everything recorded before
/// the failure.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, RunTrace partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}

  const RunTrace& partial() const { return partial_; }

 private:
  RunTrace partial_;
};

/// Uniformly spaced sample indices ceil(1 + (n-1)(i-1)/(count-1)),
/// i = 1..count. Always contains 1 and n; strictly increasing. Fractional
/// targets go up, which keeps the inter-sample gaps equal whenever
/// (n - 1) is a multiple of (count - 1) plus a remainder spread at the end
/// (e.g. n = 5000 yields 1, 501, 1001, ..., 4501, 5000 with five hundred
/// indices between consecutive samples).
inline std::vector<GridIndex> initial_sample_indices(GridIndex n, int count) {
  if (count < 2) throw std::invalid_argument("initial samples: count < 2");
  if (n < count) throw std::invalid_argument("initial samples: n < count");
  std::vector<GridIndex> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) {
    const double target = 1.0 + double(n - 1) * double(i - 1) / double(count - 1);
    out.push_back(static_cast<GridIndex>(std::ceil(target)));
  }
  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    if (out[k] >= out[k + 1]) {
      throw std::invalid_argument("initial samples: rounding collision");
    }
  }
  return out;
}

namespace detail {

inline constexpr double kExtremaDeltaScale = 1e-6;

/// Evaluation bookkeeping shared by the drivers: no-resample guard,
/// incumbent curve, error wrapping.
class EvalBook {
 public:
  EvalBook(const Objective& objective, const Grid<double>& grid,
           SmoothingSystem<double>& system, RunTrace& trace)
      : objective_(objective), grid_(grid), system_(system), trace_(trace) {}

  double best() const { return trace_.best_value; }

  void evaluate(GridIndex index, int iteration, EvalReason reason,
                GridIndex candidate) {
    if (system_.sampled(index)) {
      throw std::logic_error("driver asked to re-evaluate a sampled index");
    }
    double value;
    try {
      value = objective_(grid_.point(index));
    } catch (const std::exception& e) {
      fail(std::string("objective evaluation failed at index ") +
           std::to_string(index) + ": " + e.what());
    }
    if (!std::isfinite(value)) {
      fail("objective returned a non-finite value at index " +
           std::to_string(index));
    }
    system_.add_sample(index, value);
    trace_.evaluations.push_back({index, iteration, value, reason, candidate});
    if (value < trace_.best_value) {
      trace_.best_value = value;
      trace_.best_index = index;
    }
    trace_.incumbents.push_back({trace_.eval_count(), trace_.best_value});
  }

 private:
  [[noreturn]] void fail(const std::string& message) {
    throw EvaluationError(message, trace_);
  }

  const Objective& objective_;
  const Grid<double>& grid_;
  SmoothingSystem<double>& system_;
  RunTrace& trace_;
};

inline void check_run_inputs(const Grid<double>& grid, const RunConfig& config) {
  config.validate();
  if (grid.size() != config.n_points) {
    throw std::invalid_argument("config n_points does not match the grid");
  }
}

inline std::vector<GridIndex> new_unsampled_extrema(
    const ExtremaSets& sets, const SmoothingSystem<double>& system) {
  std::set<GridIndex> merged(sets.maxima.begin(), sets.maxima.end());
  merged.insert(sets.minima.begin(), sets.minima.end());
  std::vector<GridIndex> out;
  for (GridIndex i : merged) {
    if (!system.sampled(i)) out.push_back(i);
  }
  return out;
}

inline RunTrace run_budgeted(const Objective& objective,
                             const Grid<double>& grid, const RunConfig& config,
                             bool tabu_enabled) {
  check_run_inputs(grid, config);
  const GridIndex n = grid.size();
  SmoothingSystem<double> system(n, config.alpha, config.mu);
  RunTrace trace;
  EvalBook book(objective, grid, system, trace);

  TabuState<double> tabu = make_tabu_state<double>(
      n, config.e_max_total, config.tenure_init, config.nu_min, config.nu_max);
  for (GridIndex i : initial_sample_indices(n, config.initial_sample_count)) {
    book.evaluate(i, 0, EvalReason::initial, i);
    tabu.iter_found[i] = 0;
  }

  int it = 0;
  while (system.sample_count() < config.e_max_total) {
    ++it;
    const Fit<double> fit = fit_surrogate(system, it);
    if (config.record_snapshots) trace.fit_snapshots.push_back(fit);
    const double delta = fit.range() * kExtremaDeltaScale;
    const ExtremaSets sets = detect_extrema(fit, delta, delta);
    std::vector<GridIndex> candidates = new_unsampled_extrema(sets, system);

    std::map<GridIndex, EvalReason> reason_of;
    if (tabu_enabled) {
      tabu.current_iter = it;
      manage_tabu_struct(tabu, fit, system, delta, delta);
      std::vector<GridIndex> kept;
      for (const NonTabuPoint& p :
           classify_non_tabu_points(candidates, fit, system, tabu)) {
        kept.push_back(p.index);
        switch (p.reason) {
          case NonTabuReason::plain:
            reason_of[p.index] = EvalReason::extremum;
            break;
          case NonTabuReason::aspiration1:
            reason_of[p.index] = EvalReason::aspiration1;
            break;
          case NonTabuReason::aspiration2:
            reason_of[p.index] = EvalReason::aspiration2;
            break;
        }
      }
      candidates = std::move(kept);
    } else {
      for (GridIndex c : candidates) reason_of[c] = EvalReason::extremum;
    }

    bool exploration = false;
    if (candidates.empty()) {
      const GridIndex k =
          find_largest_unexplored_interval(system.sampled_indices(), fit);
      candidates = {k};
      reason_of[k] = EvalReason::exploration;
      exploration = true;
    }
    candidates = sort_candidates(std::move(candidates), fit);

    const int remaining = config.e_max_total -
                          static_cast<int>(system.sample_count());
    const int take = std::min({static_cast<int>(candidates.size()),
                               config.e_max_itr, remaining});
    const double best_before = book.best();
    for (int k = 0; k < take; ++k) {
      const GridIndex j = candidates[static_cast<std::size_t>(k)];
      if (system.sampled(j)) continue;  // consumed by an earlier bend
      GridIndex target = j;
      EvalReason reason = reason_of.at(j);
      if (tabu_enabled && !exploration) {
        target =
            sample_around_the_bend(j, fit, system.sampled_indices(), config.theta);
        if (reason == EvalReason::extremum && target != j) {
          reason = EvalReason::bend;
        }
      }
      book.evaluate(target, it, reason, j);
      tabu.iter_found[target] = it;
    }
    if (book.best() < best_before) {
      tabu.prev_new_min = trace.best_index;
      tabu.prev_improvement = best_before - book.best();
    } else {
      tabu.prev_new_min.reset();
      tabu.prev_improvement = 0.0;
    }
  }
  trace.iterations = it;
  trace.final_fit = fit_surrogate(system, it);
  return trace;
}

}  // namespace detail

/// Extrema chasing without a budget-driven loop: sample every new unsampled
/// extremum of the fit until two successive fits differ by at most e_min on
/// average or no new extrema appear. e_max_total acts as a hard cap on
/// evaluations.
inline RunTrace extrema_hunter(const Objective& objective,
                               const Grid<double>& grid,
                               const RunConfig& config) {
  detail::check_run_inputs(grid, config);
  const GridIndex n = grid.size();
  SmoothingSystem<double> system(n, config.alpha, config.mu);
  RunTrace trace;
  detail::EvalBook book(objective, grid, system, trace);
  for (GridIndex i : initial_sample_indices(n, config.initial_sample_count)) {
    book.evaluate(i, 0, EvalReason::initial, i);
  }

  Fit<double> previous(Vector<double>::Zero(n), 0);
  double e = config.e_min + 1.0;
  int it = 0;
  while (e > config.e_min && system.sample_count() < config.e_max_total) {
    ++it;
    const Fit<double> fit = fit_surrogate(system, it);
    if (config.record_snapshots) trace.fit_snapshots.push_back(fit);
    const double delta = fit.range() * detail::kExtremaDeltaScale;
    const ExtremaSets sets = detect_extrema(fit, delta, delta);
    const std::vector<GridIndex> fresh = detail::new_unsampled_extrema(sets, system);
    if (fresh.empty()) break;
    for (GridIndex i : fresh) {
      if (system.sample_count() >= config.e_max_total) break;
      book.evaluate(i, it, EvalReason::extremum, i);
    }
    e = fit_change_error(previous, fit);
    previous = fit;
  }
  trace.iterations = it;
  trace.final_fit = fit_surrogate(system, it);
  return trace;
}

/// Budget-limited extrema chasing with tabu filtering, aspiration overrides,
/// exploration fallback, and around-the-bend sampling.
inline RunTrace linewalker_full(const Objective& objective,
                                const Grid<double>& grid,
                                const RunConfig& config) {
  return detail::run_budgeted(objective, grid, config, /*tabu_enabled=*/true);
}

/// The same loop with the tabu and around-the-bend machinery removed;
/// exploration still fires when no new unsampled extrema exist.
inline RunTrace linewalker_pure(const Objective& objective,
                                const Grid<double>& grid,
                                const RunConfig& config) {
  return detail::run_budgeted(objective, grid, config, /*tabu_enabled=*/false);
}

inline RunTrace run_algorithm(Algorithm algo, const Objective& objective,
                              const Grid<double>& grid,
                              const RunConfig& config) {
  switch (algo) {
    case Algorithm::full: return linewalker_full(objective, grid, config);
    case Algorithm::pure: return linewalker_pure(objective, grid, config);
    case Algorithm::hunter: return extrema_hunter(objective, grid, config);
  }
  throw std::logic_error("unreachable");
}

}  // namespace linewalker
