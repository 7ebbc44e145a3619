#pragma once

#include <stdexcept>
#include <string>

namespace topo {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A parameter lies outside its documented domain (R <= 2P, q > d, ...).
struct ParameterError : Error {
  using Error::Error;
};

// Matrix/vector dimensions do not chain or clouds disagree on ambient dim.
struct ShapeError : Error {
  using Error::Error;
};

// A combinatorial guard tripped (simplex cap, oracle size cap).
struct CapacityError : Error {
  using Error::Error;
};

// Non-finite values where finite ones are required.
struct NumericError : Error {
  using Error::Error;
};

// A filtration violates face closure or sort order.
struct FiltrationError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// Training produced a non-finite loss; remembers the offending epoch.
struct DivergenceError : NumericError {
  explicit DivergenceError(int epoch_index)
      : NumericError("training diverged (non-finite loss) at epoch " +
                     std::to_string(epoch_index)),
        epoch(epoch_index) {}
  int epoch;
};

// Wraps any failure inside a pipeline stage with the stage name.
struct StageError : Error {
  StageError(const std::string& stage_name, const std::string& cause)
      : Error("stage '" + stage_name + "' failed: " + cause), stage(stage_name) {}
  std::string stage;
};

}  // namespace topo
