#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlq {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed DIMACS input. line() is 1-based; 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A size cap (brute-force or circuit) was exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller-side promise (e.g. s <= 1 for UNIQUE SAT) does not hold.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class UnsupportedModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Broken internal invariant, e.g. an empty bisection interval.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace nlq
