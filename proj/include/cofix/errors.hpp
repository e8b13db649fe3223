#pragma once

#include <stdexcept>
#include <string>

namespace cofix {

/// Base class for all toolkit errors. The CLI maps any Error to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or ill-typed input: bad JSON documents, out-of-range values,
/// duplicate identifiers, references to unknown states.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A term does not fit a signature: unknown constructor, arity mismatch,
/// or attribute payload of the wrong schema.
class SchemaError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A lattice value of the wrong kind (or outside the carrier) was passed
/// to a lattice operation.
class TypeError : public Error {
public:
    using Error::Error;
};

/// A predicate-map lookup or transformer step left its finite domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An enumeration or oracle would exceed its configured size cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

} // namespace cofix
