#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace l2control {

// Rejected input or violated precondition.  The CLI maps these to exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Horizon outside its admissible range (tau <= 0, t past the signal end, ...).
class InvalidHorizon : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Certificate request with a test horizon that is not strictly inside (0, vartheta).
class InvalidTestHorizon : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Pursuit asked for without the resource advantage rho > sigma.
class PursuitNotGuaranteed : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Tail-weight model whose implied l2 tail does not converge.
class DivergentTail : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Scenario file rejected; carries every issue found, not just the first.
class ScenarioValidationError : public InvalidInput {
 public:
  explicit ScenarioValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues);
  std::vector<std::string> issues_;
};

// Numeric failure while computing.  The CLI maps these to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cholesky pivot failure: the matrix that must be SPD is not.
class NotPositiveDefinite : public NumericError {
 public:
  using NumericError::NumericError;
};

// Iteration budget or bracket guard exhausted; message carries the last state.
class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace l2control
