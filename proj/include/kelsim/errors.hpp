#pragma once

#include <stdexcept>
#include <string>

namespace kelsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration (bad parameters, malformed config text).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a function (p < 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Non-finite values or an unstable update.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A state invariant is violated (e.g. u below the negativity tolerance).
class StateError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Inputs for which the requested quantity carries no information.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Two independent evaluations of the same quantity disagree.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace kelsim
