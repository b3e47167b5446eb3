#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hilbert {

/// Base of every error thrown by the toolkit.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric argument lies outside the operation's domain (p < 1, lambda <= 0, ...).
class domain_error : public error {
public:
    using error::error;
};

/// A configuration object is inconsistent (epsilon below grid resolution, padding < 2, ...).
class config_error : public error {
public:
    using error::error;
};

/// Inputs that must agree do not (grid mismatch, decomposition built from another signal),
/// or an internal identity that must hold by construction was violated.
class consistency_error : public error {
public:
    using error::error;
};

/// A documented precondition on the data does not hold (nonzero mean of a bad part, ...).
class precondition_error : public error {
public:
    using error::error;
};

/// Malformed input file. Carries the 1-based line and column of the offending field.
class parse_error : public error {
public:
    parse_error(const std::string& what, std::size_t line, std::size_t column)
        : error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace hilbert
