#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace tsvar {

/// Argument tuple for a Lagrangian L(t, u_0, ..., u_r). Slot u_i carries the
/// trajectory composition with r - i sigma shifts and i delta derivatives,
/// so u_0 is the fully shifted trajectory and u_r its r-th delta derivative.
struct EvalPoint {
    double t = 0.0;
    std::vector<double> u;
};

/// Value plus the partial derivatives with respect to u_0..u_r.
struct Partials {
    double value = 0.0;
    std::vector<double> grad;
};

namespace detail {
struct ExprNode;
}

/// A parsed Lagrangian expression over t, u0, u1, ... with operators
/// + - * / ^ (caret binds tightest, right associative), unary minus and the
/// functions sin, cos, exp, log, sqrt.
///
/// Grammar:
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := unary ('^' factor)?
///   unary  := '-' unary | atom
///   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
///
/// Numbers are decimal with optional fraction and exponent. Whitespace is
/// insignificant. Non-integer powers require a positive base; integer powers
/// are exact repeated multiplication. Parse positions in errors are 0-based
/// character offsets.
class Lagrangian {
public:
    static Lagrangian parse(std::string_view source);

    Lagrangian(const Lagrangian& other);
    Lagrangian& operator=(const Lagrangian& other);
    Lagrangian(Lagrangian&&) noexcept;
    Lagrangian& operator=(Lagrangian&&) noexcept;
    ~Lagrangian();

    /// Plain evaluation. Throws EvalError on domain violations, naming the
    /// offending subexpression.
    double eval(const EvalPoint& p) const;

    /// Value and exact partials d/du_i for i = 0..order via one forward-mode
    /// dual sweep per variable. Requires p.u.size() == order + 1 and
    /// max_var() <= order.
    Partials partials(const EvalPoint& p, int order) const;

    /// Highest u index appearing in the expression; -1 when none does.
    int max_var() const { return max_var_; }

    /// Render back to source form. Reparsing the result yields a structurally
    /// identical tree (parentheses carry no nodes), and literals print with
    /// enough digits to round-trip bit for bit.
    std::string to_string() const;

    friend bool structurally_equal(const Lagrangian& a, const Lagrangian& b);

private:
    Lagrangian(std::unique_ptr<detail::ExprNode> root, int max_var);

    std::unique_ptr<detail::ExprNode> root_;
    int max_var_ = -1;
};

bool structurally_equal(const Lagrangian& a, const Lagrangian& b);

}  // namespace tsvar
