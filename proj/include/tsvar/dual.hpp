#pragma once

#include <cmath>

namespace tsvar {

/// Forward-mode scalar: a value and one directional derivative. Arithmetic
/// propagates the derivative exactly through every primitive the expression
/// grammar offers. Domain checks live in the evaluator, which knows the
/// offending subexpression.
struct Dual {
    double v = 0.0;
    double d = 0.0;

    constexpr Dual() = default;
    constexpr Dual(double value, double deriv = 0.0) : v(value), d(deriv) {}
};

constexpr Dual operator-(Dual x) { return {-x.v, -x.d}; }
constexpr Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
constexpr Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
constexpr Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
constexpr Dual operator/(Dual a, Dual b) {
    return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}

inline Dual sin(Dual x) { return {std::sin(x.v), std::cos(x.v) * x.d}; }
inline Dual cos(Dual x) { return {std::cos(x.v), -std::sin(x.v) * x.d}; }
inline Dual exp(Dual x) {
    const double e = std::exp(x.v);
    return {e, e * x.d};
}
inline Dual log(Dual x) { return {std::log(x.v), x.d / x.v}; }
inline Dual sqrt(Dual x) {
    const double s = std::sqrt(x.v);
    return {s, x.d == 0.0 ? 0.0 : x.d / (2.0 * s)};
}

}  // namespace tsvar
