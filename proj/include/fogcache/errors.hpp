#pragma once

#include <stdexcept>
#include <string>

namespace fogcache {

/// Invalid or inconsistent configuration (exit code 1 at the CLI).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input length does not match a network layer.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cache operation would place the same file twice in one F-AP.
class DuplicateCacheError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A bounded table would grow past its configured cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An F-AP has no users, so its popularity is undefined.
class EmptyRegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fogcache
