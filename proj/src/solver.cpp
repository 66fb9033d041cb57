#include "tsvar/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tsvar/errors.hpp"

namespace tsvar {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kShrink = 0.5;
constexpr double kInitialStep = 1.0;
constexpr int kMaxBacktracks = 200;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

struct Objective {
    const VariationalProblem& p;

    /// +inf marks an inadmissible trial (non-finite values or a Lagrangian
    /// domain violation); the line search backs away from it.
    double value(const std::vector<double>& x) const {
        if (!all_finite(x)) return std::numeric_limits<double>::infinity();
        try {
            return functional_value(p, pinned_trajectory(p, x));
        } catch (const EvalError&) {
            return std::numeric_limits<double>::infinity();
        }
    }

    std::vector<double> gradient(const std::vector<double>& x) const {
        if (!all_finite(x)) throw DivergenceError("iterate left the finite domain");
        std::vector<double> g = functional_gradient(p, pinned_trajectory(p, x));
        if (!all_finite(g)) throw DivergenceError("gradient is not finite");
        return g;
    }
};

std::vector<double> stepped(const std::vector<double>& x, double alpha,
                            const std::vector<double>& d) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + alpha * d[i];
    return out;
}

/// Armijo backtracking from `trial`; returns the accepted step, or 0 when
/// no acceptable step exists down to the stall threshold.
double backtrack(const Objective& obj, const std::vector<double>& x,
                 const std::vector<double>& d, double phi0, double dphi0, double trial) {
    double alpha = trial;
    bool saw_finite = false;
    for (int i = 0; i < kMaxBacktracks; ++i) {
        const double phi = obj.value(stepped(x, alpha, d));
        if (std::isfinite(phi)) {
            saw_finite = true;
            if (phi <= phi0 + kArmijo * alpha * dphi0) return alpha;
            // The requested decrease is below resolution; accept no-worse.
            if (std::abs(kArmijo * alpha * dphi0) < 1e-16 * (1.0 + std::abs(phi0)) &&
                phi <= phi0 + 1e-16 * (1.0 + std::abs(phi0))) {
                return alpha;
            }
        }
        alpha *= kShrink;
    }
    if (!saw_finite) {
        throw DivergenceError("line search could not reach a finite functional value");
    }
    return 0.0;
}

/// Place the trial step with one secant pass on the directional derivative
/// (exact minimizer for quadratic functionals), then backtrack from it.
double search_with_secant(const Objective& obj, const std::vector<double>& x,
                          const std::vector<double>& d, double phi0, double dphi0) {
    double trial = kInitialStep;
    const std::vector<double> g1 = obj.gradient(stepped(x, kInitialStep, d));
    const double dphi1 = dot(g1, d);
    const double curvature = dphi1 - dphi0;
    if (curvature > 0.0) {
        const double t = kInitialStep * (-dphi0) / curvature;
        if (std::isfinite(t) && t > 0.0) trial = std::min(t, 1e12);
    }
    return backtrack(obj, x, d, phi0, dphi0, trial);
}

std::vector<double> initial_free_values(const VariationalProblem& p) {
    const PinnedBoundary pin = boundary_pin(p);
    const TimeScale& ts = *p.scale();
    const std::size_t left_anchor = p.free_lo() - 1;
    const std::size_t right_anchor = p.free_hi() + 1;
    const double t0 = ts.t(left_anchor);
    const double t1 = ts.t(right_anchor);
    const double y0 = pin.left.back();
    const double y1 = pin.right.front();
    std::vector<double> x(p.free_count());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double t = ts.t(p.free_lo() + j);
        x[j] = y0 + (y1 - y0) * (t - t0) / (t1 - t0);
    }
    return x;
}

/// Dense symmetric solve via LU with partial pivoting; false when singular.
bool lu_solve(std::vector<std::vector<double>> a, std::vector<double> b,
              std::vector<double>& out) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (a[pivot][col] == 0.0 || !std::isfinite(a[pivot][col])) return false;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double s = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) s -= a[ri][c] * out[c];
        out[ri] = s / a[ri][ri];
    }
    return all_finite(out);
}

std::vector<double> newton_direction(const Objective& obj, const std::vector<double>& x,
                                     const std::vector<double>& g) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> h(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        const double delta = 1e-6 * (1.0 + std::abs(x[j]));
        std::vector<double> xj = x;
        xj[j] += delta;
        const std::vector<double> gj = obj.gradient(xj);
        for (std::size_t i = 0; i < n; ++i) h[i][j] = (gj[i] - g[i]) / delta;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = 0.5 * (h[i][j] + h[j][i]);
            h[i][j] = s;
            h[j][i] = s;
        }
    }
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -g[i];
    std::vector<double> d;
    if (!lu_solve(std::move(h), std::move(rhs), d) || dot(d, g) >= 0.0) {
        d.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
    }
    return d;
}

}  // namespace

Method method_from_string(std::string_view name) {
    if (name == "sd" || name == "steepest_descent" || name == "gradient") {
        return Method::steepest_descent;
    }
    if (name == "cg" || name == "conjugate_gradient") return Method::conjugate_gradient;
    if (name == "newton") return Method::newton;
    throw ValidationError("unknown solver method '" + std::string(name) +
                          "' (expected sd, cg or newton)");
}

std::string_view method_name(Method m) {
    switch (m) {
        case Method::steepest_descent: return "sd";
        case Method::conjugate_gradient: return "cg";
        case Method::newton: return "newton";
    }
    return "?";
}

SolveResult solve(const VariationalProblem& p, const SolverOptions& opts) {
    if (!(opts.grad_tol > 0.0)) throw ValidationError("grad_tol must be positive");
    if (opts.max_iters < 0) throw ValidationError("max_iters must be nonnegative");

    const Objective obj{p};
    std::vector<double> x = initial_free_values(p);
    std::vector<double> g = obj.gradient(x);
    std::vector<double> d;

    const long restart_every = static_cast<long>(x.size());
    long iters = 0;
    bool fresh_direction = true;

    while (sup_norm(g) > opts.grad_tol && iters < opts.max_iters) {
        const bool steepest = opts.method == Method::steepest_descent;
        if (opts.method == Method::newton) {
            d = newton_direction(obj, x, g);
            fresh_direction = true;
        } else if (steepest || d.empty() || fresh_direction) {
            d.assign(g.size(), 0.0);
            for (std::size_t i = 0; i < g.size(); ++i) d[i] = -g[i];
            fresh_direction = true;
        }
        double dphi0 = dot(g, d);
        if (dphi0 >= 0.0) {
            // stale conjugate direction; fall back to the gradient
            for (std::size_t i = 0; i < g.size(); ++i) d[i] = -g[i];
            dphi0 = dot(g, d);
            fresh_direction = true;
            if (dphi0 >= 0.0) break;  // gradient numerically zero
        }

        const double phi0 = obj.value(x);
        const double alpha = steepest
                                 ? backtrack(obj, x, d, phi0, dphi0, kInitialStep)
                                 : search_with_secant(obj, x, d, phi0, dphi0);
        if (alpha == 0.0) {
            if (fresh_direction) break;  // no progress along the gradient either
            fresh_direction = true;      // retry from a restart
            d.clear();
            continue;
        }

        x = stepped(x, alpha, d);
        ++iters;

        std::vector<double> g_next = obj.gradient(x);
        if (opts.method == Method::conjugate_gradient) {
            double beta = 0.0;
            const double denom = dot(g, g);
            if (denom > 0.0 && (restart_every == 0 || iters % restart_every != 0)) {
                double num = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i) {
                    num += g_next[i] * (g_next[i] - g[i]);
                }
                beta = std::max(0.0, num / denom);
            }
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = -g_next[i] + beta * d[i];
            fresh_direction = false;
        }
        g = std::move(g_next);
    }

    GridFunction trajectory = pinned_trajectory(p, x);
    SolveReport report;
    report.functional_value = functional_value(p, trajectory);
    report.iterations = iters;
    report.grad_norm = sup_norm(g);
    report.converged = report.grad_norm <= opts.grad_tol;
    report.max_el_residual = el_residual(p, trajectory).max_abs();
    return SolveResult{std::move(trajectory), report};
}

}  // namespace tsvar
