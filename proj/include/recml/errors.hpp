#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace recml {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input / parsing
class EmptyInput final : public Error {
public:
    using Error::Error;
};

/// CSV or numeric-field parse failure. `line` is the 1-based physical line
/// where the offending record starts, or 0 when unknown.
class ParseError final : public Error {
public:
    explicit ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : what + " (line " + std::to_string(line) + ")"),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Schema / encoding
class SchemaMismatch final : public Error {
public:
    using Error::Error;
};
class UnseenCategory final : public Error {
public:
    using Error::Error;
};
class DegenerateTarget final : public Error {
public:
    using Error::Error;
};

// Configuration
class BadConfig final : public Error {
public:
    using Error::Error;
};
class TooFewRows final : public Error {
public:
    using Error::Error;
};

// Numeric / model preconditions
class DimensionMismatch final : public Error {
public:
    using Error::Error;
};
class DegenerateInput final : public Error {
public:
    using Error::Error;
};
class ZeroVariance final : public Error {
public:
    using Error::Error;
};
class SingleClass final : public Error {
public:
    using Error::Error;
};
class NonFiniteLoss final : public Error {
public:
    using Error::Error;
};
class BadPartition final : public Error {
public:
    using Error::Error;
};
class ConstantTruth final : public Error {
public:
    using Error::Error;
};

}  // namespace recml
