#pragma once

#include <stdexcept>
#include <string>

namespace galerkin {

/// Unsupported or inconsistent configuration (bad kind/dim, p <= 1, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested level does not fit the field (projection upward, bad ladder).
class LevelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation applied to the wrong space kind, or fields from different spaces.
class KindError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton did not reach the residual tolerance.
class StepError : public std::runtime_error {
 public:
  StepError(const std::string& what, double residual, int step = -1)
      : std::runtime_error(what), residual_(residual), step_(step) {}
  double residual() const noexcept { return residual_; }
  int step() const noexcept { return step_; }

 private:
  double residual_;
  int step_;
};

}  // namespace galerkin
