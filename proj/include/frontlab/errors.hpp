#pragma once

#include <stdexcept>
#include <string>

namespace frontlab {

// Exit-code mapping used by the CLI: ConfigError -> 1, NumericError -> 2,
// BracketError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Raised when a perturbation parameter violates mu_1 + nu > 0.
class AdmissibilityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

/// A bisection could not start or an evidence certificate is missing.
class BracketError : public Error {
 public:
  using Error::Error;
};

}  // namespace frontlab

#include <atomic>
#include <iostream>
#include <string_view>

namespace frontlab {

inline std::atomic<bool>& warnings_enabled() {
  static std::atomic<bool> enabled{true};
  return enabled;
}

/// Non-fatal diagnostics (under-resolved grids, truncated budgets) go to stderr.
inline void warn(std::string_view message) {
  if (warnings_enabled().load()) std::cerr << "frontlab: warning: " << message << '\n';
}

}  // namespace frontlab
