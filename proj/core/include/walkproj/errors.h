#pragma once

#include <stdexcept>
#include <string>

namespace walkproj {

/// Malformed input: wrong dimensions, non-finite entries, negative horizons.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A well-formed request outside the mathematical domain of the operation
/// (infeasible speed, logarithm of a non-positive eigenvalue, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative or factorization routine failed to deliver the requested
/// accuracy.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// The model or controller cannot be built as requested (null space of the
/// periodic-gait system has the wrong dimension, constraint block not
/// invertible, ...).
class DesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The time-projection block system is singular at the requested instant.
/// Callers hold the last computed input.
class ProjectionSingularity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace walkproj
