#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace moore {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed `.moore` / `.subst` text. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line), column_(column), detail_(message) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

/// A precondition of an operation does not hold (bad symbol, mismatched
/// alphabets, missing fixed point, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

} // namespace moore
