#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "linewalker/types.hpp"

namespace linewalker {

/// Symmetric pentadiagonal matrix stored as three bands: main diagonal,
/// first and second sub-diagonal. Entries beyond |i - j| > 2 are zero.
template <class Scalar = double>
struct SmoothingBands {
  Vector<Scalar> diag;  // n
  Vector<Scalar> sub1;  // n - 1
  Vector<Scalar> sub2;  // n - 2

  GridIndex size() const { return diag.size(); }

  DenseMatrix<Scalar> dense() const {
    const GridIndex n = size();
    DenseMatrix<Scalar> m = DenseMatrix<Scalar>::Zero(n, n);
    m.diagonal() = diag;
    m.template diagonal<1>() = sub1;
    m.template diagonal<-1>() = sub1;
    m.template diagonal<2>() = sub2;
    m.template diagonal<-2>() = sub2;
    return m;
  }

  /// z' M z evaluated through the bands, O(n).
  Scalar quad_form(const Vector<Scalar>& z) const {
    const GridIndex n = size();
    Scalar s = diag.dot(z.cwiseProduct(z));
    s += Scalar(2) * sub1.dot(z.head(n - 1).cwiseProduct(z.tail(n - 1)));
    s += Scalar(2) * sub2.dot(z.head(n - 2).cwiseProduct(z.tail(n - 2)));
    return s;
  }
};

/// A = alpha * D1'D1 + mu * D2'D2 with D1 the (n-1) x n first-difference
/// operator and D2 the (n-2) x n second-difference operator. Built by
/// accumulating the difference rows, so the corner entries come out as the
/// operator product dictates (A(1,1) = alpha + mu).
template <class Scalar = double>
SmoothingBands<Scalar> build_smoothing_matrix(GridIndex n, Scalar alpha,
                                              Scalar mu) {
  if (n < 3) {
    throw std::invalid_argument("build_smoothing_matrix: need n >= 3");
  }
  if (alpha < Scalar(0) || mu < Scalar(0)) {
    throw std::invalid_argument(
        "build_smoothing_matrix: weights must be nonnegative");
  }
  SmoothingBands<Scalar> b;
  b.diag = Vector<Scalar>::Zero(n);
  b.sub1 = Vector<Scalar>::Zero(n - 1);
  b.sub2 = Vector<Scalar>::Zero(n - 2);
  for (GridIndex k = 0; k + 1 < n; ++k) {  // (f_{k+1} - f_k)^2
    b.diag[k] += alpha;
    b.diag[k + 1] += alpha;
    b.sub1[k] -= alpha;
  }
  for (GridIndex k = 1; k + 1 < n; ++k) {  // (f_{k+1} + f_{k-1} - 2 f_k)^2
    b.diag[k - 1] += mu;
    b.diag[k] += Scalar(4) * mu;
    b.diag[k + 1] += mu;
    b.sub1[k - 1] -= Scalar(2) * mu;
    b.sub1[k] -= Scalar(2) * mu;
    b.sub2[k - 1] += mu;
  }
  return b;
}

/// Smoothing matrix plus the sample mask and evaluated values, i.e. the data
/// for the linear system (A + diag(s)) f = diag(s) f_true. Unsampled value
/// entries are stored as zero; diag(s) never reads them.
template <class Scalar = double>
class SmoothingSystem {
 public:
  SmoothingSystem(GridIndex n, Scalar alpha, Scalar mu)
      : bands_(build_smoothing_matrix<Scalar>(n, alpha, mu)),
        mask_(Vector<Scalar>::Zero(n)),
        values_(Vector<Scalar>::Zero(n)),
        alpha_(alpha),
        mu_(mu),
        count_(0) {}

  GridIndex size() const { return bands_.size(); }
  Scalar alpha() const { return alpha_; }
  Scalar mu() const { return mu_; }
  const SmoothingBands<Scalar>& bands() const { return bands_; }
  const Vector<Scalar>& mask() const { return mask_; }
  const Vector<Scalar>& values() const { return values_; }
  GridIndex sample_count() const { return count_; }

  bool sampled(GridIndex i) const { return mask_[i - 1] != Scalar(0); }

  Scalar value(GridIndex i) const {
    if (!sampled(i)) {
      throw std::logic_error("SmoothingSystem: value at unsampled index");
    }
    return values_[i - 1];
  }

  void add_sample(GridIndex i, Scalar value) {
    if (i < 1 || i > size()) {
      throw std::out_of_range("SmoothingSystem: index out of range");
    }
    if (sampled(i)) {
      throw std::logic_error("SmoothingSystem: index sampled twice");
    }
    mask_[i - 1] = Scalar(1);
    values_[i - 1] = value;
    ++count_;
  }

  /// Sampled indices, ascending, 1-based.
  std::vector<GridIndex> sampled_indices() const {
    std::vector<GridIndex> out;
    out.reserve(static_cast<std::size_t>(count_));
    for (GridIndex i = 0; i < size(); ++i) {
      if (mask_[i] != Scalar(0)) out.push_back(i + 1);
    }
    return out;
  }

  /// Minimum evaluated true value; requires at least one sample.
  Scalar best_value() const {
    if (count_ == 0) {
      throw std::logic_error("SmoothingSystem: no samples");
    }
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (GridIndex i = 0; i < size(); ++i) {
      if (mask_[i] != Scalar(0) && values_[i] < best) best = values_[i];
    }
    return best;
  }

 private:
  SmoothingBands<Scalar> bands_;
  Vector<Scalar> mask_;
  Vector<Scalar> values_;
  Scalar alpha_;
  Scalar mu_;
  GridIndex count_;
};

/// Surrogate vector with its generation metadata.
template <class Scalar = double>
class Fit {
 public:
  Fit() : iteration_(0), min_(0), max_(0), argmin_(1), argmax_(1) {}

  explicit Fit(Vector<Scalar> values, int iteration = 0)
      : values_(std::move(values)), iteration_(iteration) {
    if (values_.size() == 0) {
      throw std::invalid_argument("Fit: empty vector");
    }
    min_ = values_.minCoeff(&argmin_);
    max_ = values_.maxCoeff(&argmax_);
    ++argmin_;
    ++argmax_;
  }

  GridIndex size() const { return values_.size(); }
  const Vector<Scalar>& values() const { return values_; }
  Scalar operator[](GridIndex i) const { return values_[i - 1]; }  // 1-based
  int iteration() const { return iteration_; }
  Scalar min_value() const { return min_; }
  Scalar max_value() const { return max_; }
  Scalar range() const { return max_ - min_; }
  GridIndex argmin() const { return argmin_; }
  GridIndex argmax() const { return argmax_; }

 private:
  Vector<Scalar> values_;
  int iteration_;
  Scalar min_, max_;
  GridIndex argmin_, argmax_;
};

namespace detail {

template <class Scalar>
void check_solvable(const SmoothingSystem<Scalar>& system) {
  const GridIndex need = system.alpha() == Scalar(0) ? 2 : 1;
  if (system.sample_count() < need) {
    throw std::invalid_argument(
        "fit_surrogate: singular system, too few samples to pin the "
        "regularizer nullspace");
  }
}

/// Least-squares trend of the sampled data over the regularizer nullspace:
/// a line in the grid index when alpha = 0, a constant otherwise. Solving
/// for the deflated data and adding the trend back keeps the poorly
/// conditioned nullspace modes exact (A annihilates the trend, so the split
/// is algebraically lossless).
template <class Scalar>
std::pair<Scalar, Scalar> sample_trend(const SmoothingSystem<Scalar>& system) {
  Scalar sum_y = 0, sum_i = 0;
  GridIndex count = 0;
  const GridIndex n = system.size();
  for (GridIndex i = 0; i < n; ++i) {
    if (system.mask()[i] != Scalar(0)) {
      sum_y += system.values()[i];
      sum_i += Scalar(i);
      ++count;
    }
  }
  const Scalar mean_y = sum_y / Scalar(count);
  if (system.alpha() > Scalar(0)) {
    return {mean_y, Scalar(0)};
  }
  const Scalar mean_i = sum_i / Scalar(count);
  Scalar sxx = 0, sxy = 0;
  for (GridIndex i = 0; i < n; ++i) {
    if (system.mask()[i] != Scalar(0)) {
      const Scalar di = Scalar(i) - mean_i;
      sxx += di * di;
      sxy += di * (system.values()[i] - mean_y);
    }
  }
  const Scalar slope = sxx > Scalar(0) ? sxy / sxx : Scalar(0);
  return {mean_y - slope * mean_i, slope};
}

}  // namespace detail

/// O(n) solve of (A + diag(s)) f = diag(s) f_true via a symmetric LDL'
/// factorization with bandwidth 2, plus two steps of iterative refinement
/// with an extended-precision residual (the regularizer's near-null affine
/// modes are poorly conditioned when samples cluster). Throws on a
/// non-positive pivot.
template <class Scalar = double>
Vector<Scalar> solve_banded(const SmoothingSystem<Scalar>& system) {
  detail::check_solvable(system);
  const GridIndex n = system.size();
  const SmoothingBands<Scalar>& a = system.bands();
  const Vector<Scalar>& mask = system.mask();

  Vector<Scalar> d(n);           // pivots
  Vector<Scalar> l1(n);          // L(j+1, j)
  Vector<Scalar> l2(n);          // L(j+2, j)
  for (GridIndex j = 0; j < n; ++j) {
    Scalar dj = a.diag[j] + mask[j];
    if (j >= 1) dj -= l1[j - 1] * l1[j - 1] * d[j - 1];
    if (j >= 2) dj -= l2[j - 2] * l2[j - 2] * d[j - 2];
    if (!(dj > Scalar(0))) {
      throw std::runtime_error(
          "solve_banded: non-positive pivot, system is singular or "
          "indefinite");
    }
    d[j] = dj;
    if (j + 1 < n) {
      Scalar v = a.sub1[j];
      if (j >= 1) v -= l1[j - 1] * l2[j - 1] * d[j - 1];
      l1[j] = v / dj;
    }
    if (j + 2 < n) {
      l2[j] = a.sub2[j] / dj;
    }
  }

  const auto solve_with_factors = [&](Vector<Scalar> rhs) {
    for (GridIndex i = 1; i < n; ++i) {  // forward, L z = rhs
      rhs[i] -= l1[i - 1] * rhs[i - 1];
      if (i >= 2) rhs[i] -= l2[i - 2] * rhs[i - 2];
    }
    rhs.array() /= d.array();                 // D w = z
    for (GridIndex i = n - 2; i >= 0; --i) {  // back, L' x = w
      rhs[i] -= l1[i] * rhs[i + 1];
      if (i + 2 < n) rhs[i] -= l2[i] * rhs[i + 2];
    }
    return rhs;
  };

  const auto [trend0, trend1] = detail::sample_trend(system);
  Vector<Scalar> b(n);
  for (GridIndex i = 0; i < n; ++i) {
    b[i] = mask[i] * (system.values()[i] - (trend0 + trend1 * Scalar(i)));
  }
  Vector<Scalar> x = solve_with_factors(b);
  for (int pass = 0; pass < 2; ++pass) {
    Vector<Scalar> r(n);
    for (GridIndex i = 0; i < n; ++i) {  // r = b - (A + diag(s)) x
      long double acc = static_cast<long double>(b[i]);
      acc -= static_cast<long double>(a.diag[i] + mask[i]) *
             static_cast<long double>(x[i]);
      if (i >= 1) {
        acc -= static_cast<long double>(a.sub1[i - 1]) *
               static_cast<long double>(x[i - 1]);
      }
      if (i + 1 < n) {
        acc -= static_cast<long double>(a.sub1[i]) *
               static_cast<long double>(x[i + 1]);
      }
      if (i >= 2) {
        acc -= static_cast<long double>(a.sub2[i - 2]) *
               static_cast<long double>(x[i - 2]);
      }
      if (i + 2 < n) {
        acc -= static_cast<long double>(a.sub2[i]) *
               static_cast<long double>(x[i + 2]);
      }
      r[i] = static_cast<Scalar>(acc);
    }
    x += solve_with_factors(r);
  }
  for (GridIndex i = 0; i < n; ++i) {
    x[i] += trend0 + trend1 * Scalar(i);
  }
  return x;
}

/// Dense route for the same system (used below a size threshold and as a
/// second algebraic path in tests). Refined the same way as the banded
/// route.
template <class Scalar = double>
Vector<Scalar> solve_dense(const SmoothingSystem<Scalar>& system) {
  detail::check_solvable(system);
  const GridIndex n = system.size();
  DenseMatrix<Scalar> m = system.bands().dense();
  m.diagonal() += system.mask();
  const auto [trend0, trend1] = detail::sample_trend(system);
  Vector<Scalar> rhs(n);
  for (GridIndex i = 0; i < n; ++i) {
    rhs[i] = system.mask()[i] *
             (system.values()[i] - (trend0 + trend1 * Scalar(i)));
  }
  const Eigen::LDLT<DenseMatrix<Scalar>> ldlt(m);
  Vector<Scalar> x = ldlt.solve(rhs);
  if (!x.allFinite()) {
    throw std::runtime_error("solve_dense: singular system");
  }
  using Long = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  for (int pass = 0; pass < 2; ++pass) {
    const Long r = rhs.template cast<long double>() -
                   m.template cast<long double>() * x.template cast<long double>();
    x += ldlt.solve(r.template cast<Scalar>().eval());
  }
  for (GridIndex i = 0; i < n; ++i) {
    x[i] += trend0 + trend1 * Scalar(i);
  }
  return x;
}

inline constexpr GridIndex kDenseSolveThreshold = 64;

template <class Scalar = double>
Fit<Scalar> fit_surrogate(const SmoothingSystem<Scalar>& system,
                          int iteration = 0) {
  Vector<Scalar> f = system.size() < kDenseSolveThreshold
                         ? solve_dense(system)
                         : solve_banded(system);
  return Fit<Scalar>(std::move(f), iteration);
}

/// Mean absolute difference between two fits of equal length.
template <class Scalar>
Scalar fit_change_error(const Fit<Scalar>& previous, const Fit<Scalar>& current) {
  if (previous.size() != current.size()) {
    throw std::invalid_argument("fit_change_error: length mismatch");
  }
  return (previous.values() - current.values()).cwiseAbs().mean();
}

}  // namespace linewalker
