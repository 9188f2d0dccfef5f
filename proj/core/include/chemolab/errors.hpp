#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chemolab {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A closed-form quantity was requested while its hypothesis fails.
class HypothesisError : public Error {
public:
  using Error::Error;
};

/// A scenario document failed validation. `path()` is the dotted key path.
class ConfigError : public Error {
public:
  ConfigError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

/// The time integrator produced an unusable state (strong negativity or a
/// non-finite value). Carries the step and node where it happened.
class NumericalAbort : public Error {
public:
  NumericalAbort(const std::string& what, std::size_t step, std::size_t node,
                 double value)
      : Error(what), step_(step), node_(node), value_(value) {}
  std::size_t step() const noexcept { return step_; }
  std::size_t node() const noexcept { return node_; }
  double value() const noexcept { return value_; }

private:
  std::size_t step_;
  std::size_t node_;
  double value_;
};

/// A trajectory does not hold enough data for the requested estimate.
class InsufficientData : public Error {
public:
  using Error::Error;
};

} // namespace chemolab
