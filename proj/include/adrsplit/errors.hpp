#pragma once

#include <stdexcept>
#include <string>

namespace adrsplit {

/// Raised when inputs violate a documented precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A tridiagonal or banded elimination hit a zero (or numerically zero) pivot.
class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative reference solve failed to reach its residual target.
class SolverBreakdown : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace adrsplit
