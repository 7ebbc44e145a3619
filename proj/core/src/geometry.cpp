#include "topoprobe/geometry.hpp"

#include <cmath>
#include <numbers>

#include "topoprobe/rng.hpp"

namespace topo {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::array<double, 4> twisted_torus_point(double major_radius, double tube_scale,
                                          double theta, double phi) {
  const double ring = major_radius + 2.0 * tube_scale * std::cos(theta);
  const double tube = 2.0 * tube_scale * std::sin(theta);
  return {ring * std::cos(phi), ring * std::sin(phi),
          tube * std::cos(phi / 2.0), tube * std::sin(phi / 2.0)};
}

PointCloud sample_twisted_torus(const TwistedTorusParams& params) {
  if (!(params.major_radius > 2.0 * params.tube_scale) || params.tube_scale <= 0.0)
    throw ParameterError("twisted torus requires R > 2P > 0");
  if (params.n_points < 1)
    throw ParameterError("twisted torus requires n_points >= 1");
  if (params.sampling == SamplingMode::kGrid &&
      params.n_theta * params.n_phi != params.n_points)
    throw ParameterError("grid sampling requires n_theta * n_phi == n_points");

  PointCloud cloud{Eigen::MatrixXd(params.n_points, 4)};
  auto emit = [&](std::int64_t row, double theta, double phi) {
    auto p = twisted_torus_point(params.major_radius, params.tube_scale, theta, phi);
    for (int c = 0; c < 4; ++c) cloud.points(row, c) = p[static_cast<std::size_t>(c)];
  };

  if (params.sampling == SamplingMode::kGrid) {
    std::int64_t row = 0;
    for (std::int64_t i = 0; i < params.n_theta; ++i)
      for (std::int64_t j = 0; j < params.n_phi; ++j)
        emit(row++, kTwoPi * static_cast<double>(i) / static_cast<double>(params.n_theta),
             kTwoPi * static_cast<double>(j) / static_cast<double>(params.n_phi));
  } else {
    SplitMix64 rng(params.seed);
    for (std::int64_t row = 0; row < params.n_points; ++row) {
      const double theta = rng.uniform(0.0, kTwoPi);
      const double phi = rng.uniform(0.0, kTwoPi);
      emit(row, theta, phi);
    }
  }
  return cloud;
}

PointCloud sample_uniform_noise(const NoiseParams& params) {
  if (params.n_points < 0) throw ParameterError("noise n_points must be >= 0");
  if (params.bounds.empty()) throw ParameterError("noise bounds must be non-empty");
  for (const auto& [lo, hi] : params.bounds)
    if (!(lo < hi)) throw ParameterError("noise interval is degenerate (min >= max)");

  const std::int64_t d = static_cast<std::int64_t>(params.bounds.size());
  PointCloud cloud{Eigen::MatrixXd(params.n_points, d)};
  SplitMix64 rng(params.seed);
  for (std::int64_t r = 0; r < params.n_points; ++r)
    for (std::int64_t c = 0; c < d; ++c) {
      const auto& [lo, hi] = params.bounds[static_cast<std::size_t>(c)];
      cloud.points(r, c) = rng.uniform(lo, hi);
    }
  return cloud;
}

PointCloud sample_validation_shape(ValidationShape shape, std::int64_t n,
                                   double noise_sd, std::uint64_t seed) {
  if (n < 1) throw ParameterError("validation shape requires n >= 1");
  if (noise_sd < 0.0) throw ParameterError("noise_sd must be >= 0");
  SplitMix64 rng(seed);

  PointCloud cloud;
  switch (shape) {
    case ValidationShape::kCircle: {
      cloud.points.resize(n, 2);
      for (std::int64_t i = 0; i < n; ++i) {
        const double a = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        cloud.points(i, 0) = std::cos(a);
        cloud.points(i, 1) = std::sin(a);
      }
      break;
    }
    case ValidationShape::kSphere: {
      // Fibonacci lattice: near-uniform and free of the clumps/holes that
      // random sampling leaves on a sphere.
      cloud.points.resize(n, 3);
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (std::int64_t i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double a = golden * static_cast<double>(i);
        cloud.points(i, 0) = r * std::cos(a);
        cloud.points(i, 1) = r * std::sin(a);
        cloud.points(i, 2) = z;
      }
      break;
    }
    case ValidationShape::kTorus: {
      const double R = 3.0, P = 1.0;
      cloud.points.resize(n, 3);
      for (std::int64_t i = 0; i < n; ++i) {
        const double theta = rng.uniform(0.0, kTwoPi);
        const double phi = rng.uniform(0.0, kTwoPi);
        cloud.points(i, 0) = (R + P * std::cos(theta)) * std::cos(phi);
        cloud.points(i, 1) = (R + P * std::cos(theta)) * std::sin(phi);
        cloud.points(i, 2) = P * std::sin(theta);
      }
      break;
    }
  }

  if (noise_sd > 0.0)
    for (std::int64_t r = 0; r < cloud.size(); ++r)
      for (std::int64_t c = 0; c < cloud.dim(); ++c)
        cloud.points(r, c) += noise_sd * rng.gaussian();
  return cloud;
}

LabeledDataset assemble_dataset(const PointCloud& manifold, const PointCloud& noise,
                                std::uint64_t seed) {
  if (noise.size() > 0 && manifold.size() > 0 && manifold.dim() != noise.dim())
    throw ShapeError("manifold and noise clouds have different ambient dimensions");

  const std::int64_t n = manifold.size() + noise.size();
  const std::int64_t d = manifold.size() > 0 ? manifold.dim() : noise.dim();

  std::vector<std::int64_t> perm(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  SplitMix64 rng(seed);
  for (std::int64_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }

  LabeledDataset out;
  out.cloud.points.resize(n, d);
  out.labels.resize(static_cast<std::size_t>(n));
  for (std::int64_t r = 0; r < n; ++r) {
    const std::int64_t src = perm[static_cast<std::size_t>(r)];
    if (src < manifold.size()) {
      out.cloud.points.row(r) = manifold.points.row(src);
      out.labels[static_cast<std::size_t>(r)] = 1;
    } else {
      out.cloud.points.row(r) = noise.points.row(src - manifold.size());
      out.labels[static_cast<std::size_t>(r)] = 0;
    }
  }
  return out;
}

std::vector<std::pair<double, double>> bounding_box(const PointCloud& cloud,
                                                    double margin) {
  if (cloud.size() < 1) throw ParameterError("bounding box of an empty cloud");
  std::vector<std::pair<double, double>> box;
  box.reserve(static_cast<std::size_t>(cloud.dim()));
  for (std::int64_t c = 0; c < cloud.dim(); ++c)
    box.emplace_back(cloud.points.col(c).minCoeff() - margin,
                     cloud.points.col(c).maxCoeff() + margin);
  return box;
}

}  // namespace topo
