#pragma once

#include <stdexcept>
#include <string>

namespace sketchlab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (out-of-range value, bad shape, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// An operation that must produce a nonempty set had nothing to produce.
class EmptySetError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A required bound parameter was not supplied.
class MissingParameter : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Parameters are well-formed but the request cannot be carried out:
/// combinatorial guards, trivial null spaces, and similar.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Malformed input file or document.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace sketchlab
