#pragma once

#include <stdexcept>
#include <string>

namespace intercept {

/// Range collapsed to zero (or below) where the polar kinematics are undefined.
class SingularGeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// R(tau) never became positive on the searched interval.
class NoRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A delayed-state or history query reached further back than the stored data.
class HistoryError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Invalid parameters or configuration file contents.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace intercept
