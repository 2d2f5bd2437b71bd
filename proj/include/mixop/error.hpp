#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mixop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A value violates a type invariant (negative weight, non-finite coordinate, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Transport between measures whose total masses differ.
class MassMismatch : public Error {
 public:
  using Error::Error;
};

/// An iterative solver stopped before reaching its tolerance.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// d_mixed exceeded d_meta at some step of a convergence run.
class NonexpansiveViolation : public Error {
 public:
  NonexpansiveViolation(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace mixop
