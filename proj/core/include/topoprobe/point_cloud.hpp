#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "topoprobe/errors.hpp"

namespace topo {

// n points in d-dimensional Euclidean space, one row per point. The common
// currency between all modules.
struct PointCloud {
  Eigen::MatrixXd points;

  PointCloud() = default;
  explicit PointCloud(Eigen::MatrixXd m) : points(std::move(m)) {}

  std::int64_t size() const { return points.rows(); }
  std::int64_t dim() const { return points.cols(); }
};

inline void require_finite(const PointCloud& cloud) {
  if (!cloud.points.allFinite())
    throw NumericError("point cloud contains non-finite coordinates");
}

// Point cloud plus binary labels: 1 = on-manifold, 0 = noise.
struct LabeledDataset {
  PointCloud cloud;
  std::vector<std::int32_t> labels;
};

}  // namespace topo
