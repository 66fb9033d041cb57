#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tsvar/grid_function.hpp"
#include "tsvar/lagrangian.hpp"
#include "tsvar/time_scale.hpp"

namespace tsvar {

/// The order-r variational problem
///
///   minimize  integral over [a, rho^{r-1}(b)) of
///             L(t, y^{sigma^r}, y^{sigma^{r-1} Delta}, ..., y^{Delta^r})
///
/// subject to y^{Delta^j}(a) = left_bc[j] and
/// y^{Delta^j}(rho^{r-1}(b)) = right_bc[j] for j = 0..r-1.
///
/// The boundary rows pin exactly the first r and last r grid values; indices
/// r..N-r stay free. Requires N >= 2r so at least one value is free.
class VariationalProblem {
public:
    VariationalProblem(TimeScalePtr scale, int order, Lagrangian lagrangian,
                       std::vector<double> left_bc, std::vector<double> right_bc);

    const TimeScalePtr& scale() const { return scale_; }
    int order() const { return order_; }
    const Lagrangian& lagrangian() const { return lagrangian_; }
    const std::vector<double>& left_bc() const { return left_bc_; }
    const std::vector<double>& right_bc() const { return right_bc_; }

    std::size_t max_index() const { return scale_->max_index(); }
    /// First free index (= order).
    std::size_t free_lo() const { return static_cast<std::size_t>(order_); }
    /// Last free index (= N - order).
    std::size_t free_hi() const { return max_index() - static_cast<std::size_t>(order_); }
    std::size_t free_count() const { return free_hi() - free_lo() + 1; }

private:
    TimeScalePtr scale_;
    int order_;
    Lagrangian lagrangian_;
    std::vector<double> left_bc_;
    std::vector<double> right_bc_;
};

/// Grid values forced by the boundary conditions: left[j] = y(t_j) for
/// j = 0..r-1 and right[j] = y(t_{N-r+1+j}) for j = 0..r-1. Each side is a
/// triangular forward-difference solve anchored at a and rho^{r-1}(b).
struct PinnedBoundary {
    std::vector<double> left;
    std::vector<double> right;
};

PinnedBoundary boundary_pin(const VariationalProblem& p);

/// Full-domain trajectory from the free values (indices r..N-r); the pinned
/// stencils come from boundary_pin.
GridFunction pinned_trajectory(const VariationalProblem& p,
                               std::span<const double> free_values);

/// The functional: sum_{k=0}^{N-r} mu(t_k) L(t_k, u_0(k), ..., u_r(k)) with
/// u_i = y^{sigma^{r-i} Delta^i}. Requires y on the full domain [0, N].
/// Evaluation domain errors are rethrown with the grid index attached.
double functional_value(const VariationalProblem& p, const GridFunction& y);

/// One unit bump per free index m in {r, ..., N-r}. Every bump leaves both
/// pinned stencils zero, so all boundary rows of an admissible variation
/// vanish; on a finite grid these bumps span the admissible space.
std::vector<GridFunction> admissible_variation_basis(const TimeScalePtr& scale, int order);
std::vector<GridFunction> admissible_variation_basis(const VariationalProblem& p);

/// True when eta^{Delta^j} vanishes (within tol*(1 + max|eta|)) at a and at
/// rho^{r-1}(b) for j = 0..r-1.
bool is_admissible(const VariationalProblem& p, const GridFunction& eta, double tol = 1e-12);

/// Gateaux derivative of the functional at y in direction eta:
///   sum_k mu(t_k) sum_i dL/du_i (t_k, u(k)) * eta^{sigma^{r-i} Delta^i}(t_k).
double first_variation(const VariationalProblem& p, const GridFunction& y,
                       const GridFunction& eta);

/// Euler-Lagrange residual on [a, rho^{2r}(b)] (indices 0..N-2r):
///
///   R = sum_{i=0}^{r} (-1)^i (1/a1)^{i(i-1)/2} (dL/du_i)^{Delta^i}
///
/// where dL/du_i is sampled along y on indices 0..N-r and then
/// delta-differentiated i times as a grid function. The a1 powers come from
/// commuting sigma past Delta once per parts pass. For r = 1 this is
/// dL/du_0 - (dL/du_1)^Delta. A trajectory is stationary iff R vanishes;
/// concretely mu(t_j) R(t_j) equals the first variation against the unit
/// bump at index j + r.
GridFunction el_residual(const VariationalProblem& p, const GridFunction& y);

/// Gradient of the functional with respect to the free values, assembled by
/// chain rule: the mu-weighted partials are pushed back through the adjoints
/// of the shift and delta-derivative operators. Entry j corresponds to free
/// index r + j.
std::vector<double> functional_gradient(const VariationalProblem& p, const GridFunction& y);

/// sum_{i=0}^{r} sup |y^{sigma^i Delta^{r-i}}| over the T^{k^r} window.
double weak_norm(const GridFunction& y, int order);

/// Pairings of f against the sigma^r-shifted bump basis. Since the shifted
/// bump at free index m is the Kronecker delta at k = m - r, the pairing
/// matrix is diagonal with entries mu(t_j) > 0, and f is recoverable as
/// pairings[j] / mu(t_j): the discrete fundamental lemma.
struct LemmaProbe {
    /// pairings[j] pairs f with the bump at free index r + j.
    std::vector<double> pairings;
    /// True iff (all pairings vanish) == (f vanishes identically).
    bool kernel_trivial = false;
    GridFunction reconstructed;
};

/// f must live exactly on indices [0, N-2r].
LemmaProbe fundamental_lemma_probe(const TimeScalePtr& scale, int order,
                                   const GridFunction& f);

}  // namespace tsvar
