#pragma once

#include <Eigen/Core>

#include <vector>

namespace wlens {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IndexMatrix = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic>;

/// A function between finite point sets, as the table of images.
using PointMap = std::vector<Index>;

}  // namespace wlens
