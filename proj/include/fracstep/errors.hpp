#pragma once

#include <stdexcept>
#include <string>

namespace fracstep {

/// Invalid parameters or configuration (maps to CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its contract (maps to CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double achieved = 0.0)
      : std::runtime_error(what), achieved_(achieved) {}

  /// Final residual, error bound, or other figure of merit reached before failing.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace fracstep
