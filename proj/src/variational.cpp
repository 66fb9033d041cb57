#include "tsvar/variational.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "tsvar/delta.hpp"
#include "tsvar/errors.hpp"

namespace tsvar {

namespace {

void require_full_domain(const VariationalProblem& p, const GridFunction& y,
                         const char* what) {
    if (*y.scale() != *p.scale()) {
        throw ValidationError(std::string(what) + " lives on a different scale");
    }
    if (y.lo() != 0 || y.hi() != p.max_index()) {
        throw ValidationError(std::string(what) + " must cover the full domain [0, " +
                              std::to_string(p.max_index()) + "]");
    }
}

/// All slot compositions u_i = y^{sigma^{r-i} Delta^i}, i = 0..r, each on
/// the window [0, N-r].
std::vector<GridFunction> slot_compositions(const GridFunction& y, int order) {
    std::vector<GridFunction> u;
    const auto r = static_cast<std::size_t>(order);
    u.reserve(r + 1);
    for (std::size_t i = 0; i <= r; ++i) u.push_back(compose_sigma_delta(y, r - i, i));
    return u;
}

EvalPoint point_at(const std::vector<GridFunction>& u, const TimeScale& ts, std::size_t k) {
    EvalPoint p;
    p.t = ts.t(k);
    p.u.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) p.u[i] = u[i].at(k);
    return p;
}

[[noreturn]] void rethrow_with_index(const EvalError& e, const TimeScale& ts, std::size_t k) {
    throw EvalError(std::string(e.what()) + " (at grid index " + std::to_string(k) +
                    ", t = " + std::to_string(ts.t(k)) + ")");
}

}  // namespace

VariationalProblem::VariationalProblem(TimeScalePtr scale, int order, Lagrangian lagrangian,
                                       std::vector<double> left_bc,
                                       std::vector<double> right_bc)
    : scale_(std::move(scale)),
      order_(order),
      lagrangian_(std::move(lagrangian)),
      left_bc_(std::move(left_bc)),
      right_bc_(std::move(right_bc)) {
    if (!scale_) throw ValidationError("problem requires a time scale");
    if (order_ < 1) throw ValidationError("problem order must be at least 1");
    const auto r = static_cast<std::size_t>(order_);
    if (scale_->max_index() < 2 * r) {
        throw SizeError("order " + std::to_string(order_) + " needs at least " +
                        std::to_string(2 * r + 1) + " grid points, scale has " +
                        std::to_string(scale_->size()));
    }
    if (left_bc_.size() != r || right_bc_.size() != r) {
        throw ValidationError("boundary lists must each have exactly " + std::to_string(r) +
                              " entries (order " + std::to_string(order_) + ")");
    }
    if (lagrangian_.max_var() > order_) {
        throw ValidationError("lagrangian references u" +
                              std::to_string(lagrangian_.max_var()) +
                              " but the problem order is " + std::to_string(order_));
    }
}

PinnedBoundary boundary_pin(const VariationalProblem& p) {
    const TimeScale& ts = *p.scale();
    const auto r = static_cast<std::size_t>(p.order());

    // d[j] walks the forward-difference table column by column:
    // y^{Delta^j}(t_{i+1}) = y^{Delta^j}(t_i) + mu(t_i) y^{Delta^{j+1}}(t_i).
    const auto pin_from = [&ts, r](std::size_t anchor, const std::vector<double>& bc) {
        std::vector<double> d = bc;
        std::vector<double> values(r);
        values[0] = d[0];
        for (std::size_t step = 0; step + 1 < r; ++step) {
            const double mu = ts.mu(anchor + step);
            for (std::size_t j = 0; j + step + 1 < r; ++j) d[j] += mu * d[j + 1];
            values[step + 1] = d[0];
        }
        return values;
    };

    PinnedBoundary out;
    out.left = pin_from(0, p.left_bc());
    out.right = pin_from(p.max_index() - r + 1, p.right_bc());
    return out;
}

GridFunction pinned_trajectory(const VariationalProblem& p,
                               std::span<const double> free_values) {
    if (free_values.size() != p.free_count()) {
        throw ValidationError("expected " + std::to_string(p.free_count()) +
                              " free values, got " + std::to_string(free_values.size()));
    }
    const PinnedBoundary pin = boundary_pin(p);
    std::vector<double> y(p.max_index() + 1);
    const auto r = static_cast<std::size_t>(p.order());
    for (std::size_t i = 0; i < r; ++i) {
        y[i] = pin.left[i];
        y[p.max_index() - r + 1 + i] = pin.right[i];
    }
    for (std::size_t j = 0; j < free_values.size(); ++j) y[p.free_lo() + j] = free_values[j];
    return GridFunction(p.scale(), 0, std::move(y));
}

double functional_value(const VariationalProblem& p, const GridFunction& y) {
    require_full_domain(p, y, "trajectory");
    const TimeScale& ts = *p.scale();
    const auto u = slot_compositions(y, p.order());
    const std::size_t top = ts.max_index() - static_cast<std::size_t>(p.order());

    double acc = 0.0;
    for (std::size_t k = 0; k <= top; ++k) {
        try {
            acc += ts.mu(k) * p.lagrangian().eval(point_at(u, ts, k));
        } catch (const EvalError& e) {
            rethrow_with_index(e, ts, k);
        }
    }
    return acc;
}

std::vector<GridFunction> admissible_variation_basis(const TimeScalePtr& scale, int order) {
    if (order < 1) throw ValidationError("order must be at least 1");
    const auto r = static_cast<std::size_t>(order);
    if (scale->max_index() < 2 * r) {
        throw SizeError("no free indices: grid has " + std::to_string(scale->size()) +
                        " points, order " + std::to_string(order));
    }
    std::vector<GridFunction> basis;
    basis.reserve(scale->max_index() - 2 * r + 1);
    for (std::size_t m = r; m <= scale->max_index() - r; ++m) {
        std::vector<double> v(scale->max_index() + 1, 0.0);
        v[m] = 1.0;
        basis.emplace_back(scale, 0, std::move(v));
    }
    return basis;
}

std::vector<GridFunction> admissible_variation_basis(const VariationalProblem& p) {
    return admissible_variation_basis(p.scale(), p.order());
}

bool is_admissible(const VariationalProblem& p, const GridFunction& eta, double tol) {
    require_full_domain(p, eta, "variation");
    const auto r = static_cast<std::size_t>(p.order());
    const std::size_t anchor = p.max_index() - r + 1;
    const double bound = tol * (1.0 + eta.max_abs());
    for (std::size_t j = 0; j < r; ++j) {
        const GridFunction dj = delta_derivative_n(eta, j);
        if (std::abs(dj.at(0)) > bound || std::abs(dj.at(anchor)) > bound) return false;
    }
    return true;
}

double first_variation(const VariationalProblem& p, const GridFunction& y,
                       const GridFunction& eta) {
    require_full_domain(p, y, "trajectory");
    require_full_domain(p, eta, "variation");
    const TimeScale& ts = *p.scale();
    const int r = p.order();
    const auto u = slot_compositions(y, r);
    const auto eta_u = slot_compositions(eta, r);
    const std::size_t top = ts.max_index() - static_cast<std::size_t>(r);

    double acc = 0.0;
    for (std::size_t k = 0; k <= top; ++k) {
        try {
            const Partials lp = p.lagrangian().partials(point_at(u, ts, k), r);
            double inner = 0.0;
            for (std::size_t i = 0; i < lp.grad.size(); ++i) {
                inner += lp.grad[i] * eta_u[i].at(k);
            }
            acc += ts.mu(k) * inner;
        } catch (const EvalError& e) {
            rethrow_with_index(e, ts, k);
        }
    }
    return acc;
}

GridFunction el_residual(const VariationalProblem& p, const GridFunction& y) {
    require_full_domain(p, y, "trajectory");
    const TimeScale& ts = *p.scale();
    const auto r = static_cast<std::size_t>(p.order());
    const auto u = slot_compositions(y, p.order());
    const std::size_t top = ts.max_index() - r;

    // Sample every partial along the trajectory: G_i(t_k) = dL/du_i at k.
    std::vector<std::vector<double>> partials(r + 1, std::vector<double>(top + 1));
    for (std::size_t k = 0; k <= top; ++k) {
        try {
            const Partials lp = p.lagrangian().partials(point_at(u, ts, k), p.order());
            for (std::size_t i = 0; i <= r; ++i) partials[i][k] = lp.grad[i];
        } catch (const EvalError& e) {
            rethrow_with_index(e, ts, k);
        }
    }

    const std::size_t out_top = ts.max_index() - 2 * r;
    std::vector<double> residual(out_top + 1, 0.0);
    for (std::size_t i = 0; i <= r; ++i) {
        const GridFunction gi(p.scale(), 0, std::move(partials[i]));
        const GridFunction gdi = delta_derivative_n(gi, i);
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        const double coeff = std::pow(1.0 / ts.a1(), static_cast<double>(i * (i - 1) / 2));
        for (std::size_t j = 0; j <= out_top; ++j) residual[j] += sign * coeff * gdi.at(j);
    }
    return GridFunction(p.scale(), 0, std::move(residual));
}

std::vector<double> functional_gradient(const VariationalProblem& p, const GridFunction& y) {
    require_full_domain(p, y, "trajectory");
    const TimeScale& ts = *p.scale();
    const auto r = static_cast<std::size_t>(p.order());
    const auto u = slot_compositions(y, p.order());
    const std::size_t top = ts.max_index() - r;

    std::vector<std::vector<double>> weighted(r + 1, std::vector<double>(top + 1));
    for (std::size_t k = 0; k <= top; ++k) {
        try {
            const Partials lp = p.lagrangian().partials(point_at(u, ts, k), p.order());
            for (std::size_t i = 0; i <= r; ++i) weighted[i][k] = ts.mu(k) * lp.grad[i];
        } catch (const EvalError& e) {
            rethrow_with_index(e, ts, k);
        }
    }

    // u_i = Delta^i (y o sigma^{r-i}); push each weighted partial back through
    // the adjoint of Delta i times, then through the adjoint of the shift.
    std::vector<double> adj(ts.max_index() + 1, 0.0);
    for (std::size_t i = 0; i <= r; ++i) {
        std::vector<double> w = std::move(weighted[i]);
        for (std::size_t pass = 0; pass < i; ++pass) {
            // adjoint of Delta on window [0, m]: out(j) = w(j-1)/mu(j-1) - w(j)/mu(j)
            std::vector<double> out(w.size() + 1, 0.0);
            for (std::size_t k = 0; k < w.size(); ++k) {
                const double q = w[k] / ts.mu(k);
                out[k] -= q;
                out[k + 1] += q;
            }
            w = std::move(out);
        }
        const std::size_t shift = r - i;
        for (std::size_t k = 0; k < w.size(); ++k) adj[k + shift] += w[k];
    }

    std::vector<double> grad(p.free_count());
    for (std::size_t j = 0; j < grad.size(); ++j) grad[j] = adj[p.free_lo() + j];
    return grad;
}

double weak_norm(const GridFunction& y, int order) {
    if (order < 0) throw ValidationError("order must be nonnegative");
    const auto r = static_cast<std::size_t>(order);
    if (y.size() < r + 1) {
        throw SizeError("weak norm of order " + std::to_string(order) + " needs at least " +
                        std::to_string(r + 1) + " points");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i <= r; ++i) {
        acc += compose_sigma_delta(y, i, r - i).max_abs();
    }
    return acc;
}

LemmaProbe fundamental_lemma_probe(const TimeScalePtr& scale, int order,
                                   const GridFunction& f) {
    if (order < 1) throw ValidationError("order must be at least 1");
    const auto r = static_cast<std::size_t>(order);
    if (scale->max_index() < 2 * r) {
        throw SizeError("grid too small for order " + std::to_string(order));
    }
    if (*f.scale() != *scale || f.lo() != 0 || f.hi() != scale->max_index() - 2 * r) {
        throw ValidationError("probe function must live exactly on [0, " +
                              std::to_string(scale->max_index() - 2 * r) + "]");
    }
    const TimeScale& ts = *scale;

    LemmaProbe out{.pairings = {}, .kernel_trivial = false, .reconstructed = f};
    const auto basis = admissible_variation_basis(scale, order);
    out.pairings.reserve(basis.size());
    for (const GridFunction& eta : basis) {
        const GridFunction shifted = compose_sigma_delta(eta, r, 0);
        double pairing = 0.0;
        for (std::size_t k = f.lo(); k <= f.hi(); ++k) {
            pairing += ts.mu(k) * f.at(k) * shifted.at(k);
        }
        out.pairings.push_back(pairing);
    }

    double max_pairing = 0.0;
    for (double v : out.pairings) max_pairing = std::max(max_pairing, std::abs(v));
    out.kernel_trivial = (max_pairing == 0.0) == (f.max_abs() == 0.0);

    std::vector<double> rec(out.pairings.size());
    for (std::size_t j = 0; j < rec.size(); ++j) rec[j] = out.pairings[j] / ts.mu(j);
    out.reconstructed = GridFunction(scale, 0, std::move(rec));
    return out;
}

}  // namespace tsvar
