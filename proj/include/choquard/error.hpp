#pragma once

#include <stdexcept>
#include <string>

namespace choquard {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// A bound's hypothesis fails for the given constants.
class HypothesisError : public DomainError {
 public:
  explicit HypothesisError(const std::string& msg) : DomainError(msg) {}
};

/// Gamma-type function evaluated at a non-positive integer.
class PoleError : public DomainError {
 public:
  explicit PoleError(const std::string& msg) : DomainError(msg) {}
};

/// Iteration, series or quadrature failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

/// A discretization produced something that should be impossible
/// (singular resolvent, loss of positivity, collapse to zero).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

/// Invalid or unknown configuration entry.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace choquard
