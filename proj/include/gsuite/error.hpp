#pragma once

#include <stdexcept>
#include <string>

namespace gsuite {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A graph or matrix violates its structural invariants.
class FormatError : public Error {
public:
    using Error::Error;
};

/// An index entry refers past the end of the indexed dimension.
class IndexError : public Error {
public:
    using Error::Error;
};

/// Operand shapes are incompatible.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A dense materialization would exceed the configured size limit.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Symmetric normalization hit a zero-degree endpoint.
class NormalizationError : public Error {
public:
    using Error::Error;
};

/// Malformed input data (edge lists, feature tables, presets).
class DataError : public Error {
public:
    using Error::Error;
};

/// Bad user-facing configuration (flags, config keys, combinations).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Repeated runs or cross-model checks disagree.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// A serialized report cannot be read by this version.
class SchemaError : public Error {
public:
    using Error::Error;
};

} // namespace gsuite
