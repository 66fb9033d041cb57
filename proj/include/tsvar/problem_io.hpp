#pragma once

#include <filesystem>
#include <string_view>

#include "tsvar/solver.hpp"
#include "tsvar/variational.hpp"

namespace tsvar {

struct LoadedProblem {
    VariationalProblem problem;
    SolverOptions options;
};

/// Load a problem from the sectioned key-value format:
///
///   [scale]
///   kind = "uniform"        # uniform (a, b, n) | qscale (t0, q, k)
///   a = 0.0                 #                   | explicit (points = [...])
///   b = 1.0
///   n = 64
///
///   [problem]
///   order = 2
///   lagrangian = "0.5*u2^2"
///
///   [boundary]
///   left  = [0.0, 0.0]      # y^{Delta^j} at a,            j = 0..order-1
///   right = [1.0, 0.0]      # y^{Delta^j} at rho^{r-1}(b), j = 0..order-1
///
///   [solver]                # optional; defaults: cg, 1e-10, 100000
///   method = "cg"
///   grad_tol = 1e-10
///   max_iters = 100000
///
/// '#' starts a comment. Errors name the offending section and key.
LoadedProblem load_problem(const std::filesystem::path& path);

/// Same, from in-memory text (the file loader delegates here).
LoadedProblem parse_problem_text(std::string_view text);

}  // namespace tsvar
