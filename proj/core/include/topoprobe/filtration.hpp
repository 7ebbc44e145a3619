#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "topoprobe/point_cloud.hpp"

namespace topo {

// Dense symmetric matrix of pairwise Euclidean distances, zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::int64_t n)
      : n_(n), data_(static_cast<std::size_t>(n * n), 0.0) {}

  std::int64_t size() const { return n_; }
  double operator()(std::int64_t i, std::int64_t j) const {
    return data_[static_cast<std::size_t>(i * n_ + j)];
  }
  void set(std::int64_t i, std::int64_t j, double v) {
    data_[static_cast<std::size_t>(i * n_ + j)] = v;
    data_[static_cast<std::size_t>(j * n_ + i)] = v;
  }
  const double* row(std::int64_t i) const { return data_.data() + i * n_; }

 private:
  std::int64_t n_ = 0;
  std::vector<double> data_;
};

DistanceMatrix build_distance_matrix(const PointCloud& cloud);

// min over i of max over j of d(i,j): past this scale the complex is a cone
// and all homology is trivial, so it is the default Rips threshold.
double enclosing_radius(const DistanceMatrix& dm);

// Simplex of dimension <= 3, vertices sorted ascending, diameter = max
// pairwise distance of its vertices (0 for a vertex).
struct Simplex {
  double diameter = 0.0;
  std::array<std::int32_t, 4> verts{{-1, -1, -1, -1}};
  std::int32_t dim = 0;

  const std::int32_t* begin() const { return verts.data(); }
  const std::int32_t* end() const { return verts.data() + dim + 1; }
};

// Homology dimensions supported by the engine (simplices up to dim+1).
inline constexpr int kMaxHomologyDim = 2;
inline constexpr std::int64_t kDefaultSimplexCap = 40'000'000;

// Simplices of dimension <= max_dim+1 with diameter <= threshold, sorted by
// (diameter, dimension, lexicographic vertices). The extra dimension is what
// kills max_dim-cycles. Sorted order is a valid filtration: every face
// precedes its cofaces.
struct RipsFiltration {
  std::vector<Simplex> simplices;
  std::int32_t max_dim = 1;
  double threshold = std::numeric_limits<double>::infinity();
  std::int64_t n_points = 0;
};

RipsFiltration rips_filtration(const DistanceMatrix& dm, int max_dim, double threshold,
                               std::int64_t simplex_cap = kDefaultSimplexCap);

// Greedy maxmin (farthest-point) landmark selection. The first landmark is
// point (seed mod n); each next one maximizes its minimum distance to the
// chosen set, ties broken by lowest index. indices are positions in the
// original cloud, in selection order.
struct LandmarkResult {
  PointCloud cloud;
  std::vector<std::int64_t> indices;
};

LandmarkResult landmark_subsample(const PointCloud& cloud, std::int64_t k,
                                  std::uint64_t seed);

// One simplex per line: "dim; v0,v1,...; diameter".
void write_filtration_text(const RipsFiltration& filt, std::ostream& os);

}  // namespace topo
