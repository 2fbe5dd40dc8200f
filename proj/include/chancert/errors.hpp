#pragma once

#include <stdexcept>
#include <string>

namespace chancert {

// Malformed run configuration or input file. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to meet its contract (non-convergence, loss of
// unitarity, ...). The CLI maps this to exit code 3.
class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

// Requested mode does not propagate in the fiber at the requested wavelength.
class UnguidedModeError : public std::runtime_error {
 public:
  explicit UnguidedModeError(const std::string& what) : std::runtime_error(what) {}
};

// A basis-family construction is only available in certain dimensions.
class UnsupportedDimensionError : public std::invalid_argument {
 public:
  explicit UnsupportedDimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Iterative fit diverged; carries the last residual in the message.
class OptimizationFailure : public std::runtime_error {
 public:
  OptimizationFailure(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual(last_residual) {}
  double last_residual;
};

// A Kraus set that is not trace preserving.
class InvalidChannelError : public std::invalid_argument {
 public:
  explicit InvalidChannelError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace chancert
