#pragma once

#include <stdexcept>
#include <string>

namespace relaylab {

// Error taxonomy mirrors the process exit codes: bad configuration or
// parameters (2), numerical failure (3), filesystem trouble (4).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace relaylab
