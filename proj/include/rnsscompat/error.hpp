#pragma once

#include <stdexcept>
#include <string>

namespace rnsscompat {

// Bad input: malformed files, invariant violations, unknown identifiers.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation could not produce a result from otherwise valid input.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rnsscompat
