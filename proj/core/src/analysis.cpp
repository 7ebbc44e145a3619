#include "topoprobe/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "topoprobe/io.hpp"
#include "topoprobe/union_find.hpp"

namespace topo {

namespace {

// Brute-force eps-neighborhoods (self excluded); n stays in the thousands.
std::vector<std::vector<std::int64_t>> neighborhoods(const PointCloud& cloud, double eps) {
  const std::int64_t n = cloud.size();
  std::vector<std::vector<std::int64_t>> nbr(static_cast<std::size_t>(n));
  const double eps2 = eps * eps;
  for (std::int64_t i = 0; i < n; ++i) {
    const Eigen::VectorXd diffs =
        (cloud.points.rowwise() - cloud.points.row(i)).rowwise().squaredNorm();
    for (std::int64_t j = 0; j < n; ++j)
      if (j != i && diffs(j) <= eps2) nbr[static_cast<std::size_t>(i)].push_back(j);
  }
  return nbr;
}

}  // namespace

ClusterAssignment dbscan(const PointCloud& cloud, const DbscanParams& params) {
  if (!(params.eps > 0.0)) throw ParameterError("dbscan eps must be positive");
  if (params.min_pts < 1) throw ParameterError("dbscan min_pts must be >= 1");

  const std::int64_t n = cloud.size();
  ClusterAssignment out;
  out.labels.assign(static_cast<std::size_t>(n), -1);
  if (n == 0) return out;

  const auto nbr = neighborhoods(cloud, params.eps);
  std::vector<char> core(static_cast<std::size_t>(n), 0);
  for (std::int64_t i = 0; i < n; ++i)
    core[static_cast<std::size_t>(i)] =
        static_cast<std::int64_t>(nbr[static_cast<std::size_t>(i)].size()) + 1 >=
        params.min_pts;

  UnionFind uf(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    if (!core[static_cast<std::size_t>(i)]) continue;
    for (std::int64_t j : nbr[static_cast<std::size_t>(i)])
      if (core[static_cast<std::size_t>(j)])
        uf.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }

  // Cluster ids follow the lowest-indexed core point of each component.
  std::vector<std::int32_t> root_label(static_cast<std::size_t>(n), -1);
  std::int32_t next = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    if (!core[static_cast<std::size_t>(i)]) continue;
    const std::size_t root = uf.find(static_cast<std::size_t>(i));
    if (root_label[root] < 0) root_label[root] = next++;
    out.labels[static_cast<std::size_t>(i)] = root_label[root];
  }
  for (std::int64_t i = 0; i < n; ++i) {
    if (core[static_cast<std::size_t>(i)]) continue;
    std::int32_t best = -1;
    for (std::int64_t j : nbr[static_cast<std::size_t>(i)]) {
      if (!core[static_cast<std::size_t>(j)]) continue;
      const std::int32_t label = out.labels[static_cast<std::size_t>(j)];
      if (best < 0 || label < best) best = label;
    }
    out.labels[static_cast<std::size_t>(i)] = best;  // stays -1 for noise
  }
  out.k = next;
  return out;
}

double suggest_dbscan_eps(const PointCloud& cloud, int k_neighbor, double percentile) {
  const std::int64_t n = cloud.size();
  if (k_neighbor < 1 || k_neighbor >= n)
    throw ParameterError("k_neighbor must be in [1, n-1]");
  if (percentile < 0.0 || percentile > 100.0)
    throw ParameterError("percentile must be in [0, 100]");

  std::vector<double> kth(static_cast<std::size_t>(n));
  std::vector<double> row(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const Eigen::VectorXd diffs =
        (cloud.points.rowwise() - cloud.points.row(i)).rowwise().norm();
    std::size_t w = 0;
    for (std::int64_t j = 0; j < n; ++j)
      if (j != i) row[w++] = diffs(j);
    std::nth_element(row.begin(), row.begin() + (k_neighbor - 1), row.begin() + static_cast<std::ptrdiff_t>(w));
    kth[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(k_neighbor - 1)];
  }
  std::sort(kth.begin(), kth.end());
  // nearest-rank percentile
  const auto rank = static_cast<std::size_t>(std::clamp<double>(
      std::ceil(percentile / 100.0 * static_cast<double>(n)) - 1.0, 0.0,
      static_cast<double>(n - 1)));
  return kth[rank];
}

std::vector<ClusterCloud> project_clusters_to_data(const ClusterAssignment& assignment,
                                                   const PointCloud& original) {
  if (static_cast<std::int64_t>(assignment.labels.size()) != original.size())
    throw ShapeError("assignment length does not match cloud size");

  std::vector<ClusterCloud> clusters(static_cast<std::size_t>(assignment.k));
  for (std::int32_t c = 0; c < assignment.k; ++c) clusters[static_cast<std::size_t>(c)].cluster = c;
  for (std::size_t i = 0; i < assignment.labels.size(); ++i)
    if (assignment.labels[i] >= 0)
      clusters[static_cast<std::size_t>(assignment.labels[i])].indices.push_back(
          static_cast<std::int64_t>(i));
  for (ClusterCloud& cc : clusters) {
    cc.cloud.points.resize(static_cast<std::int64_t>(cc.indices.size()), original.dim());
    for (std::size_t r = 0; r < cc.indices.size(); ++r)
      cc.cloud.points.row(static_cast<std::int64_t>(r)) =
          original.points.row(cc.indices[r]);
  }
  return clusters;
}

void write_assignment_csv(const ClusterAssignment& assignment, std::ostream& os) {
  os << "index,label\n";
  for (std::size_t i = 0; i < assignment.labels.size(); ++i)
    os << i << ',' << assignment.labels[i] << '\n';
}

ClusterAssignment read_assignment_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty assignment CSV");
  ClusterAssignment out;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw IoError("assignment CSV rows need index,label");
    const auto label = static_cast<std::int32_t>(parse_double(fields[1]));
    out.labels.push_back(label);
    out.k = std::max(out.k, label + 1);
  }
  return out;
}

PcaModel pca_fit(const PointCloud& cloud, int q) {
  const std::int64_t n = cloud.size(), d = cloud.dim();
  if (n < 2) throw ParameterError("PCA needs at least two points");
  if (q < 1 || q > d) throw ParameterError("PCA components must satisfy 1 <= q <= d");

  PcaModel model;
  model.mean = cloud.points.colwise().mean();
  const Eigen::MatrixXd centered = cloud.points.rowwise() - model.mean.transpose();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
    throw NumericError("covariance eigendecomposition failed");

  // Eigen returns ascending eigenvalues; take the top q in descending order.
  model.components.resize(q, d);
  model.explained_variance.resize(q);
  for (int i = 0; i < q; ++i) {
    const Eigen::Index src = d - 1 - i;
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    model.components.row(i) = v.transpose();
    model.explained_variance(i) = std::max(0.0, solver.eigenvalues()(src));
  }
  return model;
}

PointCloud pca_project(const PcaModel& model, const PointCloud& cloud) {
  if (cloud.dim() != model.mean.size())
    throw ShapeError("cloud dimension does not match the PCA model");
  PointCloud out;
  out.points = (cloud.points.rowwise() - model.mean.transpose()) *
               model.components.transpose();
  return out;
}

}  // namespace topo
