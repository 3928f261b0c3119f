#pragma once

#include <stdexcept>
#include <string>

namespace wls {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid or inadmissible input.
struct DomainError : Error {
    using Error::Error;
};

// Two independent evaluations of the same quantity disagree.
struct ConsistencyError : Error {
    using Error::Error;
};

// Iteration, extrapolation or discretization failed to reach tolerance.
struct ConvergenceError : Error {
    using Error::Error;
};

struct AccuracyError : ConvergenceError {
    using ConvergenceError::ConvergenceError;
};

}  // namespace wls
