#pragma once

#include <stdexcept>
#include <string>

namespace bhlab {

/// Raised when a caller hands in values outside an operation's domain.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The spectral parameter sits (numerically) on a Navier eigenvalue of the box.
class ResonanceError : public std::runtime_error {
 public:
  ResonanceError(const std::string& what, int m, int n, int p, double margin)
      : std::runtime_error(what), mode_{m, n, p}, margin_(margin) {}

  const int* mode() const { return mode_; }
  double margin() const { return margin_; }

 private:
  int mode_[3];
  double margin_;
};

/// Probe wavevector not resolved by the grid.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-point iteration failed to contract.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double growth)
      : std::runtime_error(what), growth_(growth) {}
  double growth_ratio() const { return growth_; }

 private:
  double growth_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bhlab
