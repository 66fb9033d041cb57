#include "tsvar/lagrangian.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <span>
#include <utility>

#include "tsvar/dual.hpp"
#include "tsvar/errors.hpp"

namespace tsvar {
namespace detail {

enum class Op { number, var_t, var_u, add, sub, mul, div, pow, neg, call };
enum class Fn { sin, cos, exp, log, sqrt };

struct ExprNode {
    Op op;
    double number = 0.0;
    int u_index = 0;
    Fn fn = Fn::sin;
    std::unique_ptr<ExprNode> lhs;
    std::unique_ptr<ExprNode> rhs;
};

namespace {

using NodePtr = std::unique_ptr<ExprNode>;

NodePtr clone(const ExprNode& n) {
    auto c = std::make_unique<ExprNode>();
    c->op = n.op;
    c->number = n.number;
    c->u_index = n.u_index;
    c->fn = n.fn;
    if (n.lhs) c->lhs = clone(*n.lhs);
    if (n.rhs) c->rhs = clone(*n.rhs);
    return c;
}

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::sin: return "sin";
        case Fn::cos: return "cos";
        case Fn::exp: return "exp";
        case Fn::log: return "log";
        case Fn::sqrt: return "sqrt";
    }
    return "?";
}

// Binding strength used by the printer. Parentheses are inserted whenever a
// child binds no tighter than its context requires, which reproduces the
// original tree on reparse (parentheses carry no nodes).
int prec(const ExprNode& n) {
    switch (n.op) {
        case Op::add:
        case Op::sub: return 1;
        case Op::mul:
        case Op::div: return 2;
        case Op::pow: return 3;
        case Op::neg: return 4;
        default: return 5;
    }
}

void print_node(const ExprNode& n, std::string& out) {
    const auto child = [&out](const ExprNode& c, bool parens) {
        if (parens) out += '(';
        print_node(c, out);
        if (parens) out += ')';
    };
    switch (n.op) {
        case Op::number: {
            char buf[32];
            auto res = std::to_chars(buf, buf + sizeof(buf), n.number);
            out.append(buf, res.ptr);
            break;
        }
        case Op::var_t:
            out += 't';
            break;
        case Op::var_u:
            out += 'u';
            out += std::to_string(n.u_index);
            break;
        case Op::add:
        case Op::sub:
            child(*n.lhs, false);
            out += (n.op == Op::add ? '+' : '-');
            child(*n.rhs, prec(*n.rhs) <= 1);
            break;
        case Op::mul:
        case Op::div:
            child(*n.lhs, prec(*n.lhs) <= 1);
            out += (n.op == Op::mul ? '*' : '/');
            child(*n.rhs, prec(*n.rhs) <= 2);
            break;
        case Op::pow:
            child(*n.lhs, prec(*n.lhs) <= 3);
            out += '^';
            child(*n.rhs, prec(*n.rhs) <= 2);
            break;
        case Op::neg:
            out += '-';
            child(*n.lhs, prec(*n.lhs) <= 3);
            break;
        case Op::call:
            out += fn_name(n.fn);
            out += '(';
            print_node(*n.lhs, out);
            out += ')';
            break;
    }
}

std::string print_node(const ExprNode& n) {
    std::string s;
    print_node(n, s);
    return s;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Parser {
    std::string_view src;
    std::size_t pos = 0;
    int max_var = -1;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= src.size();
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    NodePtr parse_expr() {
        NodePtr node = parse_term();
        while (true) {
            if (consume('+')) {
                node = binary(Op::add, std::move(node), parse_term());
            } else if (consume('-')) {
                node = binary(Op::sub, std::move(node), parse_term());
            } else {
                return node;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr node = parse_factor();
        while (true) {
            if (consume('*')) {
                node = binary(Op::mul, std::move(node), parse_factor());
            } else if (consume('/')) {
                node = binary(Op::div, std::move(node), parse_factor());
            } else {
                return node;
            }
        }
    }

    // '^' is right associative and its base is a unary, so -x^2 == (-x)^2.
    NodePtr parse_factor() {
        NodePtr base = parse_unary();
        if (consume('^')) return binary(Op::pow, std::move(base), parse_factor());
        return base;
    }

    NodePtr parse_unary() {
        if (consume('-')) {
            auto n = std::make_unique<ExprNode>();
            n->op = Op::neg;
            n->lhs = parse_unary();
            return n;
        }
        return parse_atom();
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos >= src.size()) throw ParseError("unexpected end of input, expected a value", pos);
        const char c = src[pos];
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expr();
            if (!consume(')')) throw ParseError("expected ')'", pos);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }

    NodePtr parse_number() {
        const std::size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos < src.size() && src[pos] == '.') {
            ++pos;
            if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos]))) {
                throw ParseError("expected digits after decimal point", pos);
            }
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        }
        if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
            std::size_t mark = pos;
            ++pos;
            if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
            if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos]))) {
                // not an exponent after all ("2e" would otherwise eat the 'e')
                pos = mark;
            } else {
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            }
        }
        double value = 0.0;
        auto res = std::from_chars(src.data() + start, src.data() + pos, value);
        if (res.ec != std::errc{}) throw ParseError("invalid number literal", start);
        auto n = std::make_unique<ExprNode>();
        n->op = Op::number;
        n->number = value;
        return n;
    }

    NodePtr parse_ident() {
        const std::size_t start = pos;
        while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                                    src[pos] == '_')) {
            ++pos;
        }
        const std::string_view name = src.substr(start, pos - start);
        if (name == "t") {
            auto n = std::make_unique<ExprNode>();
            n->op = Op::var_t;
            return n;
        }
        if (name.size() >= 2 && name[0] == 'u') {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
            }
            if (digits) {
                if (name.size() > 5) throw ParseError("variable index too large", start);
                const int idx = std::atoi(std::string(name.substr(1)).c_str());
                auto n = std::make_unique<ExprNode>();
                n->op = Op::var_u;
                n->u_index = idx;
                if (idx > max_var) max_var = idx;
                return n;
            }
        }
        const Fn* fn = nullptr;
        static constexpr std::pair<std::string_view, Fn> kFns[] = {
            {"sin", Fn::sin}, {"cos", Fn::cos}, {"exp", Fn::exp},
            {"log", Fn::log}, {"sqrt", Fn::sqrt},
        };
        for (const auto& [fname, f] : kFns) {
            if (name == fname) fn = &f;
        }
        if (fn != nullptr) {
            if (!consume('(')) {
                throw ParseError("function '" + std::string(name) + "' requires '('", pos);
            }
            NodePtr arg = parse_expr();
            if (!consume(')')) throw ParseError("expected ')' after function argument", pos);
            auto n = std::make_unique<ExprNode>();
            n->op = Op::call;
            n->fn = *fn;
            n->lhs = std::move(arg);
            return n;
        }
        throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }

    static NodePtr binary(Op op, NodePtr lhs, NodePtr rhs) {
        auto n = std::make_unique<ExprNode>();
        n->op = op;
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        return n;
    }
};

// ---------------------------------------------------------------------------
// Evaluation (shared by the plain and dual sweeps)
// ---------------------------------------------------------------------------

inline double value_of(double x) { return x; }
inline double value_of(Dual x) { return x.v; }
inline double deriv_of(double) { return 0.0; }
inline double deriv_of(Dual x) { return x.d; }

template <class T>
T ipow(T base, long long n) {
    if (n < 0) return T(1.0) / ipow(base, -n);
    T acc(1.0);
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

template <class T>
[[noreturn]] void domain_fail(const ExprNode& n, const std::string& what) {
    throw EvalError(what + " in '" + print_node(n) + "'");
}

template <class T>
T eval_node(const ExprNode& n, T tval, std::span<const T> uvals) {
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    switch (n.op) {
        case Op::number:
            return T(n.number);
        case Op::var_t:
            return tval;
        case Op::var_u:
            if (static_cast<std::size_t>(n.u_index) >= uvals.size()) {
                throw EvalError("u" + std::to_string(n.u_index) + " is not available (only " +
                                std::to_string(uvals.size()) + " slots supplied)");
            }
            return uvals[static_cast<std::size_t>(n.u_index)];
        case Op::add:
            return eval_node(*n.lhs, tval, uvals) + eval_node(*n.rhs, tval, uvals);
        case Op::sub:
            return eval_node(*n.lhs, tval, uvals) - eval_node(*n.rhs, tval, uvals);
        case Op::mul:
            return eval_node(*n.lhs, tval, uvals) * eval_node(*n.rhs, tval, uvals);
        case Op::div: {
            const T den = eval_node(*n.rhs, tval, uvals);
            if (value_of(den) == 0.0) domain_fail<T>(n, "division by zero");
            return eval_node(*n.lhs, tval, uvals) / den;
        }
        case Op::pow: {
            const T base = eval_node(*n.lhs, tval, uvals);
            const T expo = eval_node(*n.rhs, tval, uvals);
            const double ev = value_of(expo);
            if (deriv_of(expo) == 0.0 && std::nearbyint(ev) == ev && std::abs(ev) <= 1e15) {
                const auto k = static_cast<long long>(ev);
                if (k < 0 && value_of(base) == 0.0) {
                    domain_fail<T>(n, "zero raised to a negative power");
                }
                return ipow(base, k);
            }
            if (!(value_of(base) > 0.0)) {
                domain_fail<T>(n, "non-integer power of a non-positive base");
            }
            return exp(expo * log(base));
        }
        case Op::neg:
            return -eval_node(*n.lhs, tval, uvals);
        case Op::call: {
            const T arg = eval_node(*n.lhs, tval, uvals);
            switch (n.fn) {
                case Fn::sin: return sin(arg);
                case Fn::cos: return cos(arg);
                case Fn::exp: return exp(arg);
                case Fn::log:
                    if (!(value_of(arg) > 0.0)) domain_fail<T>(n, "log of a non-positive value");
                    return log(arg);
                case Fn::sqrt:
                    if (value_of(arg) < 0.0) domain_fail<T>(n, "sqrt of a negative value");
                    if (value_of(arg) == 0.0 && deriv_of(arg) != 0.0) {
                        domain_fail<T>(n, "derivative of sqrt is singular at zero");
                    }
                    return sqrt(arg);
            }
            break;
        }
    }
    throw EvalError("malformed expression tree");
}

bool nodes_equal(const ExprNode& a, const ExprNode& b) {
    if (a.op != b.op) return false;
    switch (a.op) {
        case Op::number: return a.number == b.number;
        case Op::var_t: return true;
        case Op::var_u: return a.u_index == b.u_index;
        case Op::call:
            return a.fn == b.fn && nodes_equal(*a.lhs, *b.lhs);
        case Op::neg:
            return nodes_equal(*a.lhs, *b.lhs);
        default:
            return nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
    }
}

}  // namespace
}  // namespace detail

Lagrangian Lagrangian::parse(std::string_view source) {
    detail::Parser p{source};
    if (p.at_end()) throw ParseError("empty expression", 0);
    auto root = p.parse_expr();
    if (!p.at_end()) {
        throw ParseError(std::string("unexpected trailing input '") +
                             std::string(p.src.substr(p.pos)) + "'",
                         p.pos);
    }
    return Lagrangian(std::move(root), p.max_var);
}

Lagrangian::Lagrangian(std::unique_ptr<detail::ExprNode> root, int max_var)
    : root_(std::move(root)), max_var_(max_var) {}

Lagrangian::Lagrangian(const Lagrangian& other)
    : root_(detail::clone(*other.root_)), max_var_(other.max_var_) {}

Lagrangian& Lagrangian::operator=(const Lagrangian& other) {
    if (this != &other) {
        root_ = detail::clone(*other.root_);
        max_var_ = other.max_var_;
    }
    return *this;
}

Lagrangian::Lagrangian(Lagrangian&&) noexcept = default;
Lagrangian& Lagrangian::operator=(Lagrangian&&) noexcept = default;
Lagrangian::~Lagrangian() = default;

double Lagrangian::eval(const EvalPoint& p) const {
    return detail::eval_node<double>(*root_, p.t, std::span<const double>(p.u));
}

Partials Lagrangian::partials(const EvalPoint& p, int order) const {
    if (order < 0 || p.u.size() != static_cast<std::size_t>(order) + 1) {
        throw ValidationError("partials: point carries " + std::to_string(p.u.size()) +
                              " slots but order " + std::to_string(order) + " needs " +
                              std::to_string(order + 1));
    }
    if (max_var_ > order) {
        throw ValidationError("expression references u" + std::to_string(max_var_) +
                              " but the problem order is " + std::to_string(order));
    }
    Partials out;
    out.value = eval(p);
    out.grad.resize(static_cast<std::size_t>(order) + 1);
    std::vector<Dual> u(p.u.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = Dual(p.u[i], 0.0);
    for (std::size_t i = 0; i <= static_cast<std::size_t>(order); ++i) {
        u[i].d = 1.0;
        out.grad[i] =
            detail::eval_node<Dual>(*root_, Dual(p.t, 0.0), std::span<const Dual>(u)).d;
        u[i].d = 0.0;
    }
    return out;
}

std::string Lagrangian::to_string() const { return detail::print_node(*root_); }

bool structurally_equal(const Lagrangian& a, const Lagrangian& b) {
    return detail::nodes_equal(*a.root_, *b.root_);
}

}  // namespace tsvar
