#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace baryloc {

/// 0-based node index, unique within a topology. Anchors occupy the lowest ids.
using NodeId = std::int32_t;

template <typename Scalar>
using Point2T = Eigen::Matrix<Scalar, 2, 1>;

using Point2 = Point2T<double>;

/// One row per node, columns are x and y.
using PointList = Eigen::Matrix<double, Eigen::Dynamic, 2>;

}  // namespace baryloc
