#pragma once

#include <string>
#include <string_view>

#include "tsvar/variational.hpp"

namespace tsvar {

enum class Method {
    steepest_descent,
    conjugate_gradient,
    newton,
};

Method method_from_string(std::string_view name);
std::string_view method_name(Method m);

struct SolverOptions {
    Method method = Method::conjugate_gradient;
    /// Convergence: sup-norm of the free-value gradient.
    double grad_tol = 1e-10;
    long max_iters = 100000;
};

struct SolveReport {
    double functional_value = 0.0;
    long iterations = 0;
    bool converged = false;
    double grad_norm = 0.0;
    double max_el_residual = 0.0;
};

struct SolveResult {
    GridFunction trajectory;
    SolveReport report;
};

/// Minimize the functional over the free values (boundary stencils stay
/// pinned). Deterministic: no randomness, fixed line search parameters
/// (initial step 1, shrink 0.5, Armijo constant 1e-4).
///
/// Steepest descent backtracks from step 1; the conjugate-gradient and
/// Newton searches first place a secant trial step using the directional
/// derivative, then backtrack from it, which makes them exact on quadratic
/// functionals. Non-convergence within max_iters is reported, not thrown;
/// non-finite values the search cannot back out of throw DivergenceError.
SolveResult solve(const VariationalProblem& p, const SolverOptions& opts = {});

}  // namespace tsvar
