#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "topoprobe/point_cloud.hpp"

namespace topo {

enum class SamplingMode { kUniformRandom, kGrid };

// 4-D torus with a Klein-bottle-like half twist:
//   x = (R + 2P cos t) cos p
//   y = (R + 2P cos t) sin p
//   z = 2P sin t cos(p/2)
//   w = 2P sin t sin(p/2)
// with t, p in [0, 2pi). R > 2P keeps the tube from self-intersecting in
// the first three coordinates.
struct TwistedTorusParams {
  double major_radius = 3.0;  // R
  double tube_scale = 1.0;    // P
  std::int64_t n_points = 0;
  SamplingMode sampling = SamplingMode::kUniformRandom;
  std::uint64_t seed = 0;  // uniform_random mode
  std::int64_t n_theta = 0;  // grid mode; n_theta * n_phi must equal n_points
  std::int64_t n_phi = 0;
};

std::array<double, 4> twisted_torus_point(double major_radius, double tube_scale,
                                          double theta, double phi);

PointCloud sample_twisted_torus(const TwistedTorusParams& params);

struct NoiseParams {
  std::int64_t n_points = 0;
  std::vector<std::pair<double, double>> bounds;  // per-dimension (min, max)
  std::uint64_t seed = 0;
};

// i.i.d. uniform points inside the box.
PointCloud sample_uniform_noise(const NoiseParams& params);

enum class ValidationShape { kCircle, kSphere, kTorus };

// Reference shapes for validating the persistence engine:
//   circle: evenly spaced angles on the unit circle (d=2)
//   sphere: Fibonacci lattice on the unit sphere (d=3)
//   torus:  R=3, P=1 standard embedding, seeded uniform angles (d=3)
// plus isotropic Gaussian jitter of scale noise_sd.
PointCloud sample_validation_shape(ValidationShape shape, std::int64_t n,
                                   double noise_sd, std::uint64_t seed);

// Concatenates manifold (label 1) and noise (label 0) and shuffles the rows
// deterministically by seed.
LabeledDataset assemble_dataset(const PointCloud& manifold, const PointCloud& noise,
                                std::uint64_t seed);

// Per-dimension (min - margin, max + margin) of a nonempty cloud.
std::vector<std::pair<double, double>> bounding_box(const PointCloud& cloud,
                                                    double margin);

}  // namespace topo
