#include "topoprobe/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "topoprobe/io.hpp"
#include "topoprobe/rng.hpp"

namespace topo {

DistanceMatrix build_distance_matrix(const PointCloud& cloud) {
  require_finite(cloud);
  const std::int64_t n = cloud.size();
  DistanceMatrix dm(n);
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = i + 1; j < n; ++j)
      dm.set(i, j, (cloud.points.row(i) - cloud.points.row(j)).norm());
  return dm;
}

double enclosing_radius(const DistanceMatrix& dm) {
  const std::int64_t n = dm.size();
  if (n <= 1) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < n; ++i) {
    double row_max = 0.0;
    const double* row = dm.row(i);
    for (std::int64_t j = 0; j < n; ++j) row_max = std::max(row_max, row[j]);
    best = std::min(best, row_max);
  }
  return best;
}

namespace {

void check_cap(std::int64_t count, std::int64_t cap) {
  if (count > cap)
    throw CapacityError("simplex count exceeds the configured cap of " +
                        std::to_string(cap) +
                        "; raise the cap or lower threshold/max_dim");
}

}  // namespace

RipsFiltration rips_filtration(const DistanceMatrix& dm, int max_dim, double threshold,
                               std::int64_t simplex_cap) {
  if (max_dim < 0 || max_dim > kMaxHomologyDim)
    throw ParameterError("max_dim must be in [0, " + std::to_string(kMaxHomologyDim) + "]");
  if (!(threshold > 0.0)) throw ParameterError("threshold must be positive");

  const std::int64_t n = dm.size();
  const int top_dim = max_dim + 1;

  RipsFiltration filt;
  filt.max_dim = max_dim;
  filt.threshold = threshold;
  filt.n_points = n;
  auto& simplices = filt.simplices;

  for (std::int32_t v = 0; v < n; ++v) {
    Simplex s;
    s.verts[0] = v;
    s.dim = 0;
    simplices.push_back(s);
  }
  check_cap(static_cast<std::int64_t>(simplices.size()), simplex_cap);

  // Neighbor lists restricted to higher indices keep every enumeration
  // canonical (v0 < v1 < ...).
  std::vector<std::vector<std::int32_t>> nbr(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double* row = dm.row(i);
    for (std::int64_t j = i + 1; j < n; ++j)
      if (row[j] <= threshold) nbr[static_cast<std::size_t>(i)].push_back(static_cast<std::int32_t>(j));
  }

  if (top_dim >= 1) {
    for (std::int32_t i = 0; i < n; ++i)
      for (std::int32_t j : nbr[static_cast<std::size_t>(i)]) {
        Simplex s;
        s.diameter = dm(i, j);
        s.verts = {i, j, -1, -1};
        s.dim = 1;
        simplices.push_back(s);
        check_cap(static_cast<std::int64_t>(simplices.size()), simplex_cap);
      }
  }

  std::vector<std::int32_t> common;
  if (top_dim >= 2) {
    for (std::int32_t i = 0; i < n; ++i) {
      const auto& ni = nbr[static_cast<std::size_t>(i)];
      for (std::size_t a = 0; a < ni.size(); ++a) {
        const std::int32_t j = ni[a];
        const auto& nj = nbr[static_cast<std::size_t>(j)];
        // two-pointer intersection of {k in ni : k > j} with nj
        std::size_t p = a + 1, q = 0;
        while (p < ni.size() && q < nj.size()) {
          if (ni[p] < nj[q]) ++p;
          else if (nj[q] < ni[p]) ++q;
          else {
            const std::int32_t k = ni[p];
            Simplex s;
            s.diameter = std::max({dm(i, j), dm(i, k), dm(j, k)});
            s.verts = {i, j, k, -1};
            s.dim = 2;
            simplices.push_back(s);
            check_cap(static_cast<std::int64_t>(simplices.size()), simplex_cap);
            ++p;
            ++q;
          }
        }
      }
    }
  }

  if (top_dim >= 3) {
    // Tetrahedra from each triangle (i,j,k) plus a common neighbor l > k.
    const std::int64_t first_tri =
        static_cast<std::int64_t>(simplices.size());  // snapshot not needed; scan below
    (void)first_tri;
    std::vector<Simplex> tets;
    for (const Simplex& t : simplices) {
      if (t.dim != 2) continue;
      const std::int32_t i = t.verts[0], j = t.verts[1], k = t.verts[2];
      const auto& ni = nbr[static_cast<std::size_t>(i)];
      const auto& nj = nbr[static_cast<std::size_t>(j)];
      const auto& nk = nbr[static_cast<std::size_t>(k)];
      common.clear();
      std::set_intersection(ni.begin(), ni.end(), nj.begin(), nj.end(),
                            std::back_inserter(common));
      std::size_t p = 0, q = 0;
      while (p < common.size() && q < nk.size()) {
        if (common[p] < nk[q]) ++p;
        else if (nk[q] < common[p]) ++q;
        else {
          const std::int32_t l = common[p];
          if (l > k) {
            Simplex s;
            s.diameter = std::max({t.diameter, dm(i, l), dm(j, l), dm(k, l)});
            s.verts = {i, j, k, l};
            s.dim = 3;
            tets.push_back(s);
            check_cap(static_cast<std::int64_t>(simplices.size() + tets.size()), simplex_cap);
          }
          ++p;
          ++q;
        }
      }
    }
    simplices.insert(simplices.end(), tets.begin(), tets.end());
  }

  std::sort(simplices.begin(), simplices.end(), [](const Simplex& a, const Simplex& b) {
    if (a.diameter != b.diameter) return a.diameter < b.diameter;
    if (a.dim != b.dim) return a.dim < b.dim;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return filt;
}

LandmarkResult landmark_subsample(const PointCloud& cloud, std::int64_t k,
                                  std::uint64_t seed) {
  const std::int64_t n = cloud.size();
  if (k < 1 || k > n)
    throw ParameterError("landmark count must satisfy 1 <= k <= n (k=" +
                         std::to_string(k) + ", n=" + std::to_string(n) + ")");

  const std::int64_t start = static_cast<std::int64_t>(seed % static_cast<std::uint64_t>(n));
  std::vector<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  chosen.push_back(start);

  Eigen::VectorXd dmin(n);
  for (std::int64_t j = 0; j < n; ++j)
    dmin(j) = (cloud.points.row(j) - cloud.points.row(start)).norm();

  while (static_cast<std::int64_t>(chosen.size()) < k) {
    std::int64_t best = -1;
    double best_d = -1.0;
    for (std::int64_t j = 0; j < n; ++j)
      if (dmin(j) > best_d) {
        best_d = dmin(j);
        best = j;
      }
    chosen.push_back(best);
    for (std::int64_t j = 0; j < n; ++j)
      dmin(j) = std::min(dmin(j), (cloud.points.row(j) - cloud.points.row(best)).norm());
  }

  LandmarkResult result;
  result.cloud.points.resize(k, cloud.dim());
  for (std::int64_t i = 0; i < k; ++i)
    result.cloud.points.row(i) = cloud.points.row(chosen[static_cast<std::size_t>(i)]);
  result.indices = std::move(chosen);
  return result;
}

void write_filtration_text(const RipsFiltration& filt, std::ostream& os) {
  for (const Simplex& s : filt.simplices) {
    os << s.dim << "; ";
    for (const std::int32_t* v = s.begin(); v != s.end(); ++v) {
      if (v != s.begin()) os << ',';
      os << *v;
    }
    os << "; " << format_double(s.diameter) << '\n';
  }
}

}  // namespace topo
