#include "topoprobe/validation.hpp"

#include <chrono>
#include <cmath>

#include "topoprobe/geometry.hpp"
#include "topoprobe/io.hpp"
#include "topoprobe/persistence.hpp"

namespace topo {

namespace {

std::string describe_bars(const PersistenceDiagram& diagram, int dim, std::int64_t k) {
  std::string out = "H" + std::to_string(dim) + " bars:";
  for (const PersistencePair& p : dominant_features(diagram, dim, k))
    out += " [" + format_double(p.birth) + "," + format_double(p.death) + ")";
  return out;
}

std::int64_t essential_count(const PersistenceDiagram& diagram, int dim) {
  std::int64_t count = 0;
  for (const PersistencePair& p : diagram.pairs)
    count += p.dim == dim && std::isinf(p.death);
  return count;
}

}  // namespace

std::vector<ShapeCheck> run_validation_suite(bool quick) {
  std::vector<ShapeCheck> checks;

  {  // circle: one component, one loop
    ShapeCheck check;
    check.name = "circle";
    check.expected = {1, 1};
    const auto start = std::chrono::steady_clock::now();
    const PointCloud cloud =
        sample_validation_shape(ValidationShape::kCircle, quick ? 80 : 200, 0.0, 1);
    const DistanceMatrix dm = build_distance_matrix(cloud);
    const PersistenceDiagram diagram =
        compute_persistence(dm, 1, enclosing_radius(dm));
    check.read_off_scale = dominant_bar_mid_scale(diagram, 1);
    check.measured = betti_at(diagram, check.read_off_scale).betti;
    check.passed = check.measured == check.expected;
    check.detail = describe_bars(diagram, 1, 2);
    check.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    checks.push_back(std::move(check));
  }

  {  // sphere: one component, no loops, one void
    ShapeCheck check;
    check.name = "sphere";
    check.expected = {1, 0, 1};
    const auto start = std::chrono::steady_clock::now();
    const PointCloud cloud =
        sample_validation_shape(ValidationShape::kSphere, quick ? 120 : 300, 0.0, 1);
    const DistanceMatrix dm = build_distance_matrix(cloud);
    // The sphere's H2 class survives far beyond this threshold; cutting the
    // filtration early keeps the dimension-3 skeleton tractable.
    const PersistenceDiagram diagram = compute_persistence(dm, 2, 1.1);
    check.read_off_scale = dominant_bar_mid_scale(diagram, 2);
    check.measured = betti_at(diagram, check.read_off_scale).betti;
    check.passed = check.measured == check.expected;
    check.detail = describe_bars(diagram, 2, 2);
    check.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    checks.push_back(std::move(check));
  }

  {  // torus: one component, two independent loops
    ShapeCheck check;
    check.name = "torus";
    check.expected = {1, 2};
    const auto start = std::chrono::steady_clock::now();
    const PointCloud cloud =
        sample_validation_shape(ValidationShape::kTorus, quick ? 1200 : 3000, 0.0, 2);
    const LandmarkResult lm = landmark_subsample(cloud, quick ? 200 : 500, 3);
    const DistanceMatrix dm = build_distance_matrix(lm.cloud);
    // Both torus loops die below scale 4 (tube ~ sqrt(3), ring ~ 2 sqrt(3)).
    const PersistenceDiagram diagram = compute_persistence(dm, 1, 4.0);
    const auto bars = dominant_features(diagram, 1, 3);
    // Read off inside the shorter of the two real loops.
    check.read_off_scale =
        bars.size() >= 2 ? 0.5 * (bars[1].birth + std::min(bars[1].death, diagram.threshold))
                         : dominant_bar_mid_scale(diagram, 1);
    check.measured = betti_at(diagram, check.read_off_scale).betti;
    bool dominant = bars.size() >= 2;
    if (dominant && bars.size() >= 3) {
      const double second = bars[1].death - bars[1].birth;
      const double third = bars[2].death - bars[2].birth;
      dominant = second >= 3.0 * third;
    }
    check.passed = check.measured == check.expected &&
                   essential_count(diagram, 0) == 1 && dominant;
    check.detail = describe_bars(diagram, 1, 3);
    check.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    checks.push_back(std::move(check));
  }

  return checks;
}

}  // namespace topo
