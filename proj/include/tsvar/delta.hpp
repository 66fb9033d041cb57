#pragma once

#include <cstddef>

#include "tsvar/grid_function.hpp"

namespace tsvar {

/// Delta derivative f^Delta(t) = (f(sigma(t)) - f(t)) / mu(t).
///
/// Every grid point below the top is right-scattered, so this is exactly the
/// forward difference quotient; there is no truncation error. The window
/// shrinks by one from the right (the T^k truncation).
GridFunction delta_derivative(const GridFunction& f);

/// k-fold delta derivative; the window shrinks by k. k = 0 returns f.
GridFunction delta_derivative_n(const GridFunction& f, std::size_t k);

/// f composed with the i-fold forward jump: value f(t_{j+i}) at index j.
/// The window shrinks by i from the right; the clamped top point (where
/// sigma(b) = b) is excluded so window arithmetic stays uniform. i = 0
/// returns f.
GridFunction shift_sigma(const GridFunction& f, std::size_t i);

/// The composition y^{sigma^i Delta^j}: shift through sigma i times, then
/// delta-differentiate j times (superscripts apply left to right, so
/// y^{sigma Delta} means (y^sigma)^Delta). The window shrinks by i + j.
///
/// On an affine-jump grid the two orders differ by powers of a1
/// (see check_commutation), so the order here matters for a1 != 1.
GridFunction compose_sigma_delta(const GridFunction& y, std::size_t i, std::size_t j);

/// Delta integral over [t_from, t_to): the mu-weighted left-endpoint sum
/// sum_{i=from}^{to-1} mu(t_i) f(t_i). Equals F(t_to) - F(t_from) for any
/// antiderivative F. from == to gives 0.
double delta_integral(const GridFunction& f, std::size_t from, std::size_t to);

/// Residual of an identity check: the worst absolute defect together with
/// the magnitude scale of the quantities involved. Thresholds live with the
/// callers, not here.
struct IdentityResidual {
    double max_abs = 0.0;
    double scale = 1.0;

    double relative() const { return max_abs / scale; }
};

/// max |f^sigma(t) - f(t) - mu(t) f^Delta(t)| over [lo, hi-1].
/// Exact identity; scale is 1 + max|f|.
IdentityResidual check_transfor(const GridFunction& f);

/// Worst defect of both product rule forms
///   (fg)^Delta = f^Delta g^sigma + f g^Delta = f^Delta g + f^sigma g^Delta
/// over the shared window; scale is 1 + max|(fg)^Delta|.
IdentityResidual check_product_rule(const GridFunction& f, const GridFunction& g);

/// Defect of the integration by parts formula over the full shared window
/// [a, b] = [t_lo, t_hi]:
///   form 1:  int f^sigma g^Delta  =  [fg]_a^b - int f^Delta g
///   form 2:  int f      g^Delta  =  [fg]_a^b - int f^Delta g^sigma
/// scale is 1 + the magnitudes of the three participating terms.
IdentityResidual check_by_parts(const GridFunction& f, const GridFunction& g, int form);

/// max |f^{sigma Delta}(t) - a1 f^{Delta sigma}(t)| over the T^{k^2} window.
/// Exact on affine-jump grids, where mu(t_{i+1}) = a1 mu(t_i);
/// scale is 1 + max|f^{sigma Delta}|.
IdentityResidual check_commutation(const GridFunction& f);

}  // namespace tsvar
