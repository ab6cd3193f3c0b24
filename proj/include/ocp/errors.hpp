// Exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace ocp {

/// Thrown when a numeric factorization hits a zero (or below-threshold) pivot.
class SingularSystemError : public std::runtime_error {
public:
  SingularSystemError(const std::string& what, long pivotIndex)
      : std::runtime_error(what), pivotIndex_(pivotIndex) {}
  /// Index of the offending pivot (column), or -1 if the backend did not report one.
  long pivotIndex() const noexcept { return pivotIndex_; }

private:
  long pivotIndex_;
};

/// Thrown when an iterative loop exhausts its iteration budget.
class IterationLimitError : public std::runtime_error {
public:
  IterationLimitError(const std::string& what, double lastResidual, int iterations)
      : std::runtime_error(what), lastResidual_(lastResidual), iterations_(iterations) {}
  double lastResidual() const noexcept { return lastResidual_; }
  int iterations() const noexcept { return iterations_; }

private:
  double lastResidual_;
  int iterations_;
};

/// Thrown by the ASCII mesh reader on malformed or non-conforming input.
class MeshFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace ocp
