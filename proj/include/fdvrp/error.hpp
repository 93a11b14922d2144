#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fdvrp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based; 0 means "no specific line".
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Two sites that have no street path between them.
class UnreachableError : public Error {
public:
    using Error::Error;
};

} // namespace fdvrp
