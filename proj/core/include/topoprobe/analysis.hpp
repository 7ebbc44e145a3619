#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "topoprobe/point_cloud.hpp"

namespace topo {

struct DbscanParams {
  double eps = 0.0;
  int min_pts = 10;
};

// Per-point labels: -1 = noise, 0..k-1 = clusters, every cluster nonempty.
// Cluster ids are ordered by each cluster's lowest point index, so the
// result is deterministic given input order.
struct ClusterAssignment {
  std::vector<std::int32_t> labels;
  std::int32_t k = 0;
};

// Classic density-reachability clustering. A point is core when at least
// min_pts points (itself included) lie within eps; border points join the
// lowest-indexed cluster among their core neighbors.
ClusterAssignment dbscan(const PointCloud& cloud, const DbscanParams& params);

// Distance to the k_neighbor-th nearest other point, taken at `percentile`
// (0..100) over all points; the pipeline's default eps policy.
double suggest_dbscan_eps(const PointCloud& cloud, int k_neighbor, double percentile);

// One cluster's members indexed back into the original cloud.
struct ClusterCloud {
  std::int32_t cluster = 0;
  PointCloud cloud;
  std::vector<std::int64_t> indices;  // rows in the original cloud
};

// Splits `original` by cluster membership of the assignment (computed on a
// representation of the same rows); noise is dropped.
std::vector<ClusterCloud> project_clusters_to_data(const ClusterAssignment& assignment,
                                                   const PointCloud& original);

void write_assignment_csv(const ClusterAssignment& assignment, std::ostream& os);
ClusterAssignment read_assignment_csv(std::istream& is);

struct PcaModel {
  Eigen::VectorXd mean;               // d
  Eigen::MatrixXd components;         // q x d, orthonormal rows
  Eigen::VectorXd explained_variance; // q, non-increasing, >= 0
};

// Eigendecomposition of the sample covariance; components are the top-q
// eigenvectors with the largest-magnitude entry made positive.
PcaModel pca_fit(const PointCloud& cloud, int q);

// (points - mean) * components^T.
PointCloud pca_project(const PcaModel& model, const PointCloud& cloud);

}  // namespace topo
