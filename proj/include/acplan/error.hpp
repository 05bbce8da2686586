#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acplan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Source position, 1-based.
struct SourcePos {
    std::size_t line = 1;
    std::size_t column = 1;

    friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

/// Raised by the lexer, the reader and the PDDL/policy/plan front ends.
/// what() is formatted as "line:column: message".
class ParseError : public Error {
public:
    ParseError(SourcePos pos, const std::string& message)
        : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
          pos_(pos), message_(message) {}

    const SourcePos& pos() const noexcept { return pos_; }
    const std::string& message() const noexcept { return message_; }

private:
    SourcePos pos_;
    std::string message_;
};

class GroundingError : public Error {
public:
    using Error::Error;
};

class PolicyError : public Error {
public:
    using Error::Error;
};

}  // namespace acplan
