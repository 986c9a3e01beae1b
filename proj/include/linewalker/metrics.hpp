#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "linewalker/drivers.hpp"
#include "linewalker/objectives.hpp"
#include "linewalker/smoothing.hpp"

namespace linewalker {

/// Solve bar: within 1% or 0.01 of the optimum, whichever is larger.
inline double solve_tolerance(double f_star) {
  return 0.01 * std::max(1.0, std::abs(f_star));
}

/// A run solves an instance when the final fit's minimum, or the fit value
/// at the best evaluated sample, lands within solve_tolerance of f_star.
/// Both clauses read the surrogate, not the true function. Ties between
/// equal-value evaluations break toward the smallest grid index, so the
/// verdict does not depend on evaluation order.
inline bool is_solved(const RunTrace& trace, double f_star) {
  if (trace.eval_count() == 0 || trace.final_fit.size() == 0) {
    throw std::invalid_argument("is_solved: trace has no final fit");
  }
  const double tol = solve_tolerance(f_star);
  if (std::abs(trace.final_fit.min_value() - f_star) <= tol) return true;
  GridIndex best_eval = trace.evaluations.front().index;
  double best_value = trace.evaluations.front().value;
  for (const Evaluation& e : trace.evaluations) {
    if (e.value < best_value || (e.value == best_value && e.index < best_eval)) {
      best_value = e.value;
      best_eval = e.index;
    }
  }
  return std::abs(trace.final_fit[best_eval] - f_star) <= tol;
}

inline bool is_solved(const RunTrace& trace, const BenchmarkFunction& fn) {
  return is_solved(trace, fn.f_star);
}

/// Total absolute scaled error of a fit against a reference fit, both
/// relative to the same truth vector. The reference must carry some error.
template <class Scalar>
Scalar tase(const Fit<Scalar>& fit_m, const Fit<Scalar>& fit_ref,
            const Vector<Scalar>& truth) {
  if (fit_m.size() != truth.size() || fit_ref.size() != truth.size()) {
    throw std::invalid_argument("tase: length mismatch");
  }
  const Scalar denom = (fit_ref.values() - truth).cwiseAbs().sum();
  if (denom == Scalar(0)) {
    throw std::domain_error("tase: reference fit is exact (infinite TASE)");
  }
  return (fit_m.values() - truth).cwiseAbs().sum() / denom;
}

inline double mean_tase(const std::vector<double>& per_function) {
  if (per_function.empty()) {
    throw std::invalid_argument("mean_tase: empty input");
  }
  double s = 0.0;
  for (double v : per_function) s += v;
  return s / double(per_function.size());
}

struct SolveRecord {
  std::string function;
  Algorithm algorithm = Algorithm::full;
  int budget = 0;
  bool solved = false;
};

struct FractionSolvedRow {
  Algorithm algorithm = Algorithm::full;
  int budget = 0;
  int solved = 0;
  int total = 0;

  double fraction() const { return total ? double(solved) / double(total) : 0.0; }
};

/// Fraction of instances solved per (algorithm, budget), rows ordered by
/// algorithm then ascending budget.
inline std::vector<FractionSolvedRow> fraction_solved_curve(
    const std::vector<SolveRecord>& records, const std::vector<int>& budgets) {
  std::vector<FractionSolvedRow> rows;
  for (Algorithm algo : {Algorithm::full, Algorithm::pure, Algorithm::hunter}) {
    for (int b : budgets) {
      FractionSolvedRow row{algo, b, 0, 0};
      for (const SolveRecord& r : records) {
        if (r.algorithm == algo && r.budget == b) {
          ++row.total;
          if (r.solved) ++row.solved;
        }
      }
      if (row.total > 0) rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace linewalker
