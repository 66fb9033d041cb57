#pragma once

#include <stdexcept>
#include <string>

namespace tsvar {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid argument or broken invariant (ordering, sizes, ranges, non-finite data).
struct ValidationError : Error {
    using Error::Error;
};

/// The grid violates the affine-jump hypothesis sigma(t) = a1*t + a0.
struct HypothesisError : ValidationError {
    using ValidationError::ValidationError;
};

/// Domain too small for the requested operation (truncation, derivative order,
/// problem order versus grid size).
struct SizeError : ValidationError {
    using ValidationError::ValidationError;
};

/// Expression text rejected by the parser. `position()` is the 0-based
/// character offset of the offending token (input length for end-of-input).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error("syntax error at position " + std::to_string(position) + ": " + what),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Arithmetic domain violation while evaluating an expression
/// (log of a non-positive value, division by zero, ...).
struct EvalError : Error {
    using Error::Error;
};

/// The solver produced non-finite values it could not recover from.
struct DivergenceError : Error {
    using Error::Error;
};

}  // namespace tsvar
