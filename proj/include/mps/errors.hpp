#pragma once

#include <stdexcept>
#include <string>

namespace mps {

// Mismatched lengths / incompatible grids.
struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Parameter outside the mathematical domain of an operation.
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// A constructed object failed its postconditions.
struct construction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Time integration produced a non-finite value.
struct instability_error : std::runtime_error {
  long step = -1;
  instability_error(const std::string& what, long step_index)
      : std::runtime_error(what + " at step " + std::to_string(step_index)), step(step_index) {}
};

// Bad run configuration (harness / CLI level).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mps
