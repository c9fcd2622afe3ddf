#pragma once

#include <stdexcept>
#include <string>

namespace quadsure {

/// Input outside the documented domain of an operation (bad length, N < 2,
/// inadmissible covariance, μν ≤ λ², ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Wavefunction support reaches the grid boundary.
class LeakageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Collinear coefficient vectors: the observables commute and no standard
/// form exists.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver ended without meeting its tolerance.
class OptimizationError : public std::runtime_error {
 public:
  OptimizationError(const std::string& what, double best_value)
      : std::runtime_error(what), best_value_(best_value) {}
  double best_value() const noexcept { return best_value_; }

 private:
  double best_value_;
};

}  // namespace quadsure
