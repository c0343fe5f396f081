#pragma once

#include <stdexcept>
#include <string>

namespace uaext {

/// Malformed or inconsistent input (CLI exit code 2).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input that parses but violates a structural invariant, e.g. a
/// non-surjective assignment or a non-closed permutation set.
class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

/// Numerical machinery gave up (CLI exit code 3).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class RootFinderError : public ComputationError {
 public:
  RootFinderError(const std::string& what, double worst_residual)
      : ComputationError(what), worst_residual_(worst_residual) {}
  double worst_residual() const noexcept { return worst_residual_; }

 private:
  double worst_residual_;
};

/// A mathematical hypothesis of a construction does not hold for the given
/// data (CLI exit code 1).
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uaext
