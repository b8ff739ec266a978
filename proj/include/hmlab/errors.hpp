#pragma once

#include <stdexcept>
#include <string>

namespace hmlab {

// Invalid arguments or domain violations (CLI exit code 1).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A model whose data is inconsistent (non-positive density, bad config).
struct ModelError : InputError {
  using InputError::InputError;
};

// Operation requires geometry the model does not provide.
struct UnsupportedModelError : InputError {
  using InputError::InputError;
};

// Operation called before a required setup step (e.g. calibration).
struct StateError : std::logic_error {
  using std::logic_error::logic_error;
};

// Quadrature/integration/iteration failure (CLI exit code 2).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hmlab
