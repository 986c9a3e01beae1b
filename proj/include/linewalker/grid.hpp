#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "linewalker/types.hpp"

namespace linewalker {

/// Equally spaced discretization of the line segment joining two points in
/// R^D. point(1) == start and point(n) == end exactly; interior points are
/// produced with std::lerp so consecutive points are equidistant to
/// round-off.
template <class Scalar = double>
class Grid {
 public:
  Grid(Vector<Scalar> start, Vector<Scalar> end, GridIndex n_points)
      : start_(std::move(start)), end_(std::move(end)), n_(n_points) {
    if (n_ < 3) {
      throw std::invalid_argument("Grid: need at least 3 points");
    }
    if (start_.size() != end_.size() || start_.size() == 0) {
      throw std::invalid_argument("Grid: endpoint dimensions differ");
    }
    if (start_ == end_) {
      throw std::invalid_argument("Grid: endpoints coincide");
    }
  }

  /// Convenience constructor for a 1-D segment [a, b].
  Grid(Scalar a, Scalar b, GridIndex n_points)
      : Grid(scalar_point(a), scalar_point(b), n_points) {}

  GridIndex size() const { return n_; }
  Eigen::Index dim() const { return start_.size(); }
  const Vector<Scalar>& start() const { return start_; }
  const Vector<Scalar>& end() const { return end_; }

  /// Segment parameter of grid index i in [1, n]; param(1) = 0, param(n) = 1.
  Scalar param(GridIndex i) const {
    check_index(i);
    return Scalar(i - 1) / Scalar(n_ - 1);
  }

  Vector<Scalar> point(GridIndex i) const {
    const Scalar t = param(i);
    Vector<Scalar> p(start_.size());
    for (Eigen::Index k = 0; k < start_.size(); ++k) {
      p[k] = std::lerp(start_[k], end_[k], t);
    }
    return p;
  }

 private:
  static Vector<Scalar> scalar_point(Scalar v) {
    Vector<Scalar> p(1);
    p[0] = v;
    return p;
  }

  void check_index(GridIndex i) const {
    if (i < 1 || i > n_) {
      throw std::out_of_range("Grid: index out of range");
    }
  }

  Vector<Scalar> start_;
  Vector<Scalar> end_;
  GridIndex n_;
};

template <class Scalar>
Grid<Scalar> build_grid(const Vector<Scalar>& start, const Vector<Scalar>& end,
                        GridIndex n_points) {
  return Grid<Scalar>(start, end, n_points);
}

}  // namespace linewalker
