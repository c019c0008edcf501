// Error categories surfaced through the C API status codes.
#pragma once

#include <stdexcept>
#include <string>

namespace casim {

// Configuration rejected; message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem or stream failure.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace casim
