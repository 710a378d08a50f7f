// Error taxonomy shared across the library and the CLI: configuration
// problems (bad input, exit code 2) versus numerical failures during an
// otherwise valid run (singular systems, non-convergent fits, exit code 3).
#pragma once

#include <stdexcept>
#include <string>

namespace jlab {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace jlab
