#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace topo {

// One reference-shape check: Betti numbers read off at the midpoint of the
// dominant bar must match the shape's known values exactly.
struct ShapeCheck {
  std::string name;
  bool passed = false;
  std::vector<std::int64_t> expected;
  std::vector<std::int64_t> measured;
  double read_off_scale = 0.0;
  double seconds = 0.0;
  std::string detail;
};

// Circle (b0=1, b1=1), sphere (b0=1, b1=0, b2=1) and standard torus (one
// component, two dominant H1 bars). `quick` shrinks the samples for smoke
// tests; the full sizes are circle n=200, sphere n=300, torus 500 landmarks.
std::vector<ShapeCheck> run_validation_suite(bool quick);

}  // namespace topo
