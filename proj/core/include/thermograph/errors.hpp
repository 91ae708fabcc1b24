#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace thermograph {

/// Base for every failure raised by the library. `code()` is a short stable
/// identifier (e.g. "E006") used by the command-line front end.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// A precondition on an argument was violated (bad embedding, non-mixture...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& message) : Error("ARG", message) {}
};

/// An internal invariant failed. Reaching this is a bug in the engine.
class InvariantViolation : public Error {
public:
    explicit InvariantViolation(const std::string& message) : Error("INV", message) {}
};

/// A model or pattern text failed to parse or type-check. Codes E001-E008.
class ParseError : public Error {
public:
    ParseError(std::string code, const std::string& message, int line = 0, int column = 0)
        : Error(std::move(code), message), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace thermograph
