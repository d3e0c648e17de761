#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ckalg {

/// Caller violated an operation's contract (mixed graphs, non-unitary input, ...).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The graph does not support the requested operation, e.g. normal forms that
/// would have to expand through a sink.
class UnsupportedGraph : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line` is 1-based; 0 when the error has no location.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line = 0)
        : std::runtime_error(line == 0 ? message
                                       : "line " + std::to_string(line) + ": " + message),
          line_(line), bare_(message) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& bare_message() const noexcept { return bare_; }

private:
    std::size_t line_;
    std::string bare_;
};

}  // namespace ckalg
