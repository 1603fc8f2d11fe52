/**
 * @file error.hpp
 * @brief Error taxonomy shared across the library.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace grad {

/// Malformed judgement or ill-typed program; message carries the reason.
struct TypeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A reduction/conversion step budget ran out before a normal form was found.
struct FuelExhausted : std::runtime_error {
    explicit FuelExhausted(long long spent)
        : std::runtime_error("fuel exhausted after " + std::to_string(spent) + " steps"),
          steps(spent) {}
    long long steps;
};

/// Unresolvable configuration: unknown semiring, bad lattice file, flag
/// preconditions not met by the chosen semiring, oversized carriers.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Syntax error with a source position.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
          line(line_), col(col_) {}
    int line;
    int col;
};

} // namespace grad
