#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace p3pc {

/// Invalid argument to a library operation (bad probability, a == b, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Edge-list text that does not follow the line grammar.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Structurally valid input describing an invalid graph (duplicate edge, self-loop).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The supplied edges contain a directed cycle.
class CycleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace p3pc
