#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Unknown identifier or coordinate index outside 0..n+1.
class SymbolError : public ParseError {
public:
    using ParseError::ParseError;
};

/// Evaluation left the function's domain (log of nonpositive, division by zero, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Metric-spec document is structurally valid text but violates a Walker-form invariant.
class SpecError : public Error {
public:
    using Error::Error;
};

/// The screen block g_ij is not positive definite at the requested point.
class DegenerateScreenError : public Error {
public:
    using Error::Error;
};

/// A computed object broke a structural identity that must hold for Walker metrics
/// (block shape, S-valuedness of the shape operator). Signals a bug or non-Walker input.
class ConventionError : public Error {
public:
    using Error::Error;
};

}  // namespace wh
