#pragma once

#include <Eigen/Dense>

namespace linewalker {

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Grid indices are 1-based in every public signature, matching the
/// convention used throughout the library (index 1 is the first grid
/// point, index N the last). Storage is 0-based internally.
using GridIndex = Eigen::Index;

}  // namespace linewalker
