#pragma once

#include <stdexcept>
#include <string>

namespace qmd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands have incompatible or invalid dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Input violates an operation's documented hypotheses (e.g. a non-unital
/// channel handed to an analysis that requires unital + trace preserving).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An iterative numerical routine failed (no convergence, degenerate
/// random draws beyond the retry limit, ...).
class NumericError : public Error {
public:
    using Error::Error;
};

/// Two independent routes to the same mathematical object disagreed.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// A Choi matrix with a significantly negative eigenvalue.
class NotCpError : public Error {
public:
    using Error::Error;
};

/// A subspace that was required to be a *-algebra is not closed.
class NotAnAlgebraError : public Error {
public:
    using Error::Error;
};

/// Malformed serialized input.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Problem size beyond the configured dimension cap.
class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace qmd
