#ifndef DIMWIT_ERRORS_HPP_
#define DIMWIT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dimwit
{

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Operands whose dimensions or table shapes do not line up.
class ShapeError : public Error
{
public:
    using Error::Error;
};

/// A value that violates a type invariant (normalization, hermiticity, ...).
class ValidationError : public Error
{
public:
    using Error::Error;
};

/// Iterative numerics that failed to converge or lost monotonicity.
class NumericError : public Error
{
public:
    using Error::Error;
};

/// Exhaustive enumeration refused because it would exceed the configured cap.
class CapacityError : public Error
{
public:
    using Error::Error;
};

/// Malformed serialized input. The message names the source and the field.
class FormatError : public Error
{
public:
    using Error::Error;
};

} // namespace dimwit

#endif // DIMWIT_ERRORS_HPP_
