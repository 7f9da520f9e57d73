#pragma once

#include <stdexcept>

namespace dimrate {

// Raised when a computation cannot deliver a result within its stated
// tolerance (embedding failure, violated analytic bound, non-convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dimrate
