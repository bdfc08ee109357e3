#pragma once

#include <stdexcept>
#include <string>

namespace zdforge {

// Invalid input: malformed games, out-of-range indices, bad parameters.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Request exceeds the supported problem size (enumeration budgets, n caps).
struct UnsupportedSizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The equalizer feasibility region is empty: no equalizer exists.
struct EmptyRegionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested (omega, gamma, phi) does not yield valid probabilities.
struct InfeasibleEqualizerError : std::runtime_error {
  InfeasibleEqualizerError(const std::string& msg, int state, double value)
      : std::runtime_error(msg), state_index(state), offending_value(value) {}
  int state_index = 0;       // 1-based state whose probability left [0,1]
  double offending_value = 0.0;
};

// An operation was called outside its contract (e.g. nonzero initial
// action probabilities where a zero start is required).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical failure that should be unreachable for valid inputs.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace zdforge
