#include "tsvar/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tsvar/errors.hpp"

namespace tsvar {

GridFunction::GridFunction(TimeScalePtr scale, std::size_t lo, std::vector<double> values)
    : scale_(std::move(scale)), lo_(lo), values_(std::move(values)) {
    if (!scale_) throw ValidationError("grid function requires a time scale");
    if (values_.empty()) throw ValidationError("grid function requires at least one value");
    if (lo_ > scale_->max_index() || hi() > scale_->max_index()) {
        throw ValidationError("grid function window [" + std::to_string(lo_) + ", " +
                              std::to_string(lo_ + values_.size() - 1) +
                              "] exceeds the scale's index range");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw ValidationError("grid function values must be finite");
    }
}

GridFunction GridFunction::zeros(TimeScalePtr scale, std::size_t lo, std::size_t hi) {
    if (hi < lo) throw ValidationError("grid function window must satisfy lo <= hi");
    return GridFunction(std::move(scale), lo, std::vector<double>(hi - lo + 1, 0.0));
}

double GridFunction::at(std::size_t i) const {
    if (i < lo_ || i > hi()) {
        throw std::out_of_range("grid function index " + std::to_string(i) +
                                " outside window [" + std::to_string(lo_) + ", " +
                                std::to_string(hi()) + "]");
    }
    return values_[i - lo_];
}

GridFunction GridFunction::slice(std::size_t new_lo, std::size_t new_hi) const {
    if (new_lo < lo_ || new_hi > hi() || new_hi < new_lo) {
        throw ValidationError("slice window outside the function's domain");
    }
    return GridFunction(scale_, new_lo,
                        std::vector<double>(values_.begin() + (new_lo - lo_),
                                            values_.begin() + (new_hi - lo_ + 1)));
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool same_scale(const GridFunction& f, const GridFunction& g) {
    return f.scale() == g.scale() || *f.scale() == *g.scale();
}

namespace {

IndexRange overlap(const GridFunction& f, const GridFunction& g) {
    if (!same_scale(f, g)) throw ValidationError("grid functions live on different scales");
    const std::size_t lo = std::max(f.lo(), g.lo());
    const std::size_t hi = std::min(f.hi(), g.hi());
    if (hi < lo) throw ValidationError("grid function windows do not overlap");
    return IndexRange{lo, hi};
}

}  // namespace

GridFunction pointwise_product(const GridFunction& f, const GridFunction& g) {
    const IndexRange w = overlap(f, g);
    std::vector<double> v(w.size());
    for (std::size_t i = w.lo; i <= w.hi; ++i) v[i - w.lo] = f.at(i) * g.at(i);
    return GridFunction(f.scale(), w.lo, std::move(v));
}

GridFunction linear_combination(double a, const GridFunction& f, double b,
                                const GridFunction& g) {
    const IndexRange w = overlap(f, g);
    std::vector<double> v(w.size());
    for (std::size_t i = w.lo; i <= w.hi; ++i) v[i - w.lo] = a * f.at(i) + b * g.at(i);
    return GridFunction(f.scale(), w.lo, std::move(v));
}

}  // namespace tsvar
