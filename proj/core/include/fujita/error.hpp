#pragma once

#include <stdexcept>
#include <string>

namespace fujita {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A structural hypothesis of a theorem does not hold for the given inputs
/// (for instance gamma0 <= 0, or gamma0 <= mu when building a super-solution).
class HypothesisFailed : public Error {
public:
    using Error::Error;
};

/// Numerical failure inside a solver (singular pivot, lost positivity, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace fujita
