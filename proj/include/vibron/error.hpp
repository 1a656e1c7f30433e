#pragma once

#include <stdexcept>
#include <string>

namespace vibron {

/// Invalid input: bad parameters, incompatible bases, out-of-range quantum numbers.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation could not be completed (solver caps, degenerate data, broken invariants).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vibron
