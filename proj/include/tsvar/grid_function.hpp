#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "tsvar/time_scale.hpp"

namespace tsvar {

/// Real values attached to a contiguous index window [lo, hi] of a time
/// scale. Carries trajectories, variations and every sigma/delta composition
/// derived from them. Immutable; derived functions are new objects.
class GridFunction {
public:
    /// `values[k]` is the value at scale index lo + k. All values must be
    /// finite and the window must fit inside the scale.
    GridFunction(TimeScalePtr scale, std::size_t lo, std::vector<double> values);

    static GridFunction zeros(TimeScalePtr scale, std::size_t lo, std::size_t hi);

    /// Sample fn(t_i) over the window [lo, hi].
    template <class F>
    static GridFunction sample(TimeScalePtr scale, std::size_t lo, std::size_t hi, F&& fn) {
        std::vector<double> v;
        v.reserve(hi - lo + 1);
        for (std::size_t i = lo; i <= hi; ++i) v.push_back(fn(scale->t(i)));
        return GridFunction(std::move(scale), lo, std::move(v));
    }

    const TimeScalePtr& scale() const { return scale_; }
    std::size_t lo() const { return lo_; }
    std::size_t hi() const { return lo_ + values_.size() - 1; }
    std::size_t size() const { return values_.size(); }

    /// Value at a global scale index (must lie in [lo, hi]).
    double at(std::size_t i) const;
    /// Time value at a global scale index.
    double t(std::size_t i) const { return scale_->t(i); }

    std::span<const double> values() const { return values_; }

    /// Copy of the sub-window [new_lo, new_hi] (must be inside [lo, hi]).
    GridFunction slice(std::size_t new_lo, std::size_t new_hi) const;

    double max_abs() const;

private:
    TimeScalePtr scale_;
    std::size_t lo_ = 0;
    std::vector<double> values_;
};

/// True when both functions live on the same grid (same object or
/// structurally equal points and jump coefficients).
bool same_scale(const GridFunction& f, const GridFunction& g);

/// Pointwise f*g on the overlap of the two windows. Throws on scale mismatch
/// or empty overlap.
GridFunction pointwise_product(const GridFunction& f, const GridFunction& g);

/// a*f + b*g on the overlap of the two windows.
GridFunction linear_combination(double a, const GridFunction& f, double b,
                                const GridFunction& g);

}  // namespace tsvar
