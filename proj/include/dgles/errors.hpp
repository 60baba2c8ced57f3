#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dgles {

/// Bad user input: configuration keys, file contents, argument ranges.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Non-physical state (rho <= 0, p <= 0, non-finite values) detected at a node.
class InvalidStateError : public std::runtime_error {
public:
  InvalidStateError(const std::string& what, std::int64_t element = -1, std::int64_t node = -1)
      : std::runtime_error(describe(what, element, node)), element_(element), node_(node) {}

  std::int64_t element() const { return element_; }
  std::int64_t node() const { return node_; }

private:
  static std::string describe(const std::string& what, std::int64_t element, std::int64_t node) {
    if (element < 0) return what;
    return what + " (element " + std::to_string(element) + ", node " + std::to_string(node) + ")";
  }

  std::int64_t element_;
  std::int64_t node_;
};

/// Integration failure, e.g. NaN after a Runge-Kutta stage.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace dgles
