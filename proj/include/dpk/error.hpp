#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dpk {

// Dimension mismatches, non-positive parameters, malformed inputs.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotPositiveDefinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, double required)
        : std::runtime_error(what), required_(required) {}

    // Enumeration size that was requested (may exceed 2^64, hence double).
    double required() const noexcept { return required_; }

private:
    double required_;
};

// Instance document could not be parsed; line/column are 1-based, 0 if unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(what), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace dpk
