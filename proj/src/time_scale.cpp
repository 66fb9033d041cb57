#include "tsvar/time_scale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tsvar/errors.hpp"

namespace tsvar {

namespace {

void check_index(const TimeScale& ts, std::size_t i) {
    if (i > ts.max_index()) {
        throw std::out_of_range("time scale index " + std::to_string(i) +
                                " out of range [0, " + std::to_string(ts.max_index()) + "]");
    }
}

}  // namespace

TimeScale::TimeScale(std::vector<double> points, double a1, double a0)
    : points_(std::move(points)), a1_(a1), a0_(a0) {
    if (points_.size() < 3) {
        throw ValidationError("a time scale needs at least 3 points, got " +
                              std::to_string(points_.size()));
    }
    for (double p : points_) {
        if (!std::isfinite(p)) throw ValidationError("time scale points must be finite");
    }
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
        if (!(points_[i] < points_[i + 1])) {
            throw ValidationError("points must be strictly ascending (violated at index " +
                                  std::to_string(i + 1) + ")");
        }
    }
    if (!(a1_ > 0.0) || !std::isfinite(a1_) || !std::isfinite(a0_)) {
        throw HypothesisError("jump slope a1 must be positive and finite");
    }
    const double eps = 1e-9 * (points_.back() - points_.front());
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
        const double predicted = a1_ * points_[i] + a0_;
        if (std::abs(points_[i + 1] - predicted) > eps) {
            throw HypothesisError(
                "affine jump hypothesis violated: sigma(t_" + std::to_string(i) + ") = " +
                std::to_string(points_[i + 1]) + " but a1*t + a0 predicts " +
                std::to_string(predicted));
        }
    }
}

TimeScale TimeScale::unchecked(std::vector<double> points, double a1, double a0) {
    TimeScale ts;
    ts.points_ = std::move(points);
    ts.a1_ = a1;
    ts.a0_ = a0;
    return ts;
}

double TimeScale::t(std::size_t i) const {
    check_index(*this, i);
    return points_[i];
}

std::size_t TimeScale::sigma(std::size_t i) const {
    check_index(*this, i);
    return i < max_index() ? i + 1 : i;
}

std::size_t TimeScale::rho(std::size_t i) const {
    check_index(*this, i);
    return i > 0 ? i - 1 : 0;
}

double TimeScale::mu(std::size_t i) const {
    check_index(*this, i);
    return points_[sigma(i)] - points_[i];
}

std::size_t TimeScale::sigma_n(std::size_t i, std::size_t n) const {
    check_index(*this, i);
    return std::min(i + n, max_index());
}

std::size_t TimeScale::rho_n(std::size_t i, std::size_t n) const {
    check_index(*this, i);
    return i >= n ? i - n : 0;
}

IndexRange TimeScale::truncate_k(std::size_t n) const {
    if (n > max_index()) {
        throw SizeError("truncating " + std::to_string(n) + " times empties a grid of " +
                        std::to_string(size()) + " points");
    }
    return IndexRange{0, max_index() - n};
}

TimeScalePtr make_uniform(double a, double b, std::size_t n) {
    if (!(a < b)) throw ValidationError("uniform grid requires a < b");
    if (n < 2) throw ValidationError("uniform grid requires n >= 2 subintervals");
    const double h = (b - a) / static_cast<double>(n);
    std::vector<double> pts(n + 1);
    for (std::size_t i = 0; i <= n; ++i) pts[i] = a + static_cast<double>(i) * h;
    pts[n] = b;
    return std::make_shared<const TimeScale>(std::move(pts), 1.0, h);
}

TimeScalePtr make_qscale(double t0, double q, std::size_t k) {
    if (!(t0 > 0.0)) throw ValidationError("q-scale requires t0 > 0");
    if (!(q > 1.0)) throw ValidationError("q-scale requires q > 1");
    if (k < 2) throw ValidationError("q-scale requires k >= 2 steps");
    std::vector<double> pts(k + 1);
    pts[0] = t0;
    for (std::size_t i = 1; i <= k; ++i) pts[i] = pts[i - 1] * q;
    return std::make_shared<const TimeScale>(std::move(pts), q, 0.0);
}

TimeScalePtr make_explicit(std::vector<double> points) {
    if (points.size() < 3) {
        throw ValidationError("explicit scale needs at least 3 points, got " +
                              std::to_string(points.size()));
    }
    const double g0 = points[1] - points[0];
    const double g1 = points[2] - points[1];
    if (!(g0 > 0.0)) throw ValidationError("points must be strictly ascending");
    const double a1 = g1 / g0;
    const double a0 = points[1] - a1 * points[0];
    return std::make_shared<const TimeScale>(std::move(points), a1, a0);
}

}  // namespace tsvar
