#pragma once

#include <stdexcept>
#include <string>

namespace gfa {

/// Evaluation failed because a domain guard was violated (division by zero,
/// log of a non-positive argument, scale evaluated below its domain start, ...).
struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The request is outside what the implementation supports (jet order above
/// the configured maximum, derivatives of a table-backed function, ...).
struct CapabilityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Operands live in incompatible carriers (scalar vs. smooth-function mix,
/// mismatched index bindings, complex coefficient on a real function).
struct TypeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Expression source text could not be parsed; `pos` is a byte offset.
struct ExprParseError : std::runtime_error {
    std::size_t pos;
    ExprParseError(std::string msg, std::size_t p)
        : std::runtime_error(std::move(msg)), pos(p) {}
};

}  // namespace gfa
