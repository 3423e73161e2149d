#pragma once

#include <stdexcept>
#include <string>

namespace kplane {

/// An internal identity that must hold exactly was violated beyond rounding.
class DefectError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// A grid computation would be contaminated by wrap-around or aliasing.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration (unknown suite, bad tolerance, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kplane
