#pragma once

#include <stdexcept>
#include <string>

namespace grom {

/// Configuration / usage problems (bad keys, bad flags, invalid option values).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failures: singular systems, non-convergence, invariant violations.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// File format and filesystem failures.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace grom
