#pragma once

#include <stdexcept>
#include <string>

namespace vadu {

/// Malformed or out-of-contract input. Maps to CLI exit code 1.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Requested mode is not available for this input (e.g. exact mode in dim >= 3).
class UnsupportedModeError : public InputError {
public:
  using InputError::InputError;
};

/// A search or iteration ran out of its budget before deciding. Exit code 2.
class BudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An inner solver failed to reach its residual target. Exit code 3.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace vadu
