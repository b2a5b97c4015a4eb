#pragma once

#include <stdexcept>
#include <string>

namespace sgf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A parameter violates the precondition of an operation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Raised when a step would exceed the CFL target. Carries a dt that would pass.
class CflViolation : public Error {
 public:
  CflViolation(double cfl, double advisory_dt)
      : Error("CFL number " + std::to_string(cfl) + " exceeds target; try dt <= " +
              std::to_string(advisory_dt)),
        cfl_(cfl),
        advisory_dt_(advisory_dt) {}

  double cfl() const noexcept { return cfl_; }
  double advisory_dt() const noexcept { return advisory_dt_; }

 private:
  double cfl_;
  double advisory_dt_;
};

/// A grid cannot resolve a requested feature (strip, collar, boundary layer).
class Unresolved : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sgf
