#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace tsvar {

/// Inclusive index window into a time scale.
struct IndexRange {
    std::size_t lo = 0;
    std::size_t hi = 0;

    std::size_t size() const { return hi - lo + 1; }
    bool operator==(const IndexRange&) const = default;
};

class TimeScale;
using TimeScalePtr = std::shared_ptr<const TimeScale>;

/// Finite ascending grid t_0 < t_1 < ... < t_N whose forward jump operator is
/// affine: sigma(t_i) = a1*t_i + a0 for every i < N, with a1 > 0. The top
/// point is a fixed point of sigma and the bottom point a fixed point of rho.
///
/// Immutable after construction; all operations are pure index arithmetic,
/// so instances may be shared freely across threads.
class TimeScale {
public:
    /// Validates: at least 3 strictly ascending finite points, a1 > 0, and
    /// |t_{i+1} - (a1*t_i + a0)| <= 1e-9*(t_N - t_0) for every i < N.
    /// Throws ValidationError / HypothesisError.
    TimeScale(std::vector<double> points, double a1, double a0);

    std::size_t size() const { return points_.size(); }
    std::size_t max_index() const { return points_.size() - 1; }

    double t(std::size_t i) const;
    const std::vector<double>& points() const { return points_; }

    double a1() const { return a1_; }
    double a0() const { return a0_; }

    /// Forward jump as an index map: i+1, clamped at max_index().
    std::size_t sigma(std::size_t i) const;
    /// Backward jump as an index map: i-1, clamped at 0.
    std::size_t rho(std::size_t i) const;
    /// Graininess mu(t_i) = t(sigma(i)) - t(i); zero exactly at the top point.
    double mu(std::size_t i) const;

    /// n-fold forward jump, clamping at the top.
    std::size_t sigma_n(std::size_t i, std::size_t n) const;
    /// n-fold backward jump, clamping at the bottom.
    std::size_t rho_n(std::size_t i, std::size_t n) const;

    /// Index window of the n-fold truncated domain T^{k^n}: [0, N-n].
    /// Each truncation removes the (left-scattered) top point.
    /// Throws SizeError when n exceeds max_index().
    IndexRange truncate_k(std::size_t n) const;

    bool operator==(const TimeScale&) const = default;

    /// Construct without any validation. Exists so tests can probe how the
    /// identity checks behave on grids that violate the affine-jump
    /// hypothesis; never use for real data.
    static TimeScale unchecked(std::vector<double> points, double a1, double a0);

private:
    TimeScale() = default;

    std::vector<double> points_;
    double a1_ = 1.0;
    double a0_ = 0.0;
};

/// Uniform grid t_i = a + i*(b-a)/n for i = 0..n (a1 = 1, a0 = (b-a)/n).
/// Requires a < b and n >= 2.
TimeScalePtr make_uniform(double a, double b, std::size_t n);

/// Quantum grid t_i = t0*q^i for i = 0..k (a1 = q, a0 = 0).
/// Requires t0 > 0, q > 1 and k >= 2.
TimeScalePtr make_qscale(double t0, double q, std::size_t k);

/// Grid from an explicit ascending point list. The jump coefficients are
/// fitted from the first two gaps (a1 = (t2-t1)/(t1-t0), a0 = t1 - a1*t0)
/// and every consecutive pair is then checked against them.
TimeScalePtr make_explicit(std::vector<double> points);

}  // namespace tsvar
