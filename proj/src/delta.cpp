#include "tsvar/delta.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsvar/errors.hpp"

namespace tsvar {

GridFunction delta_derivative(const GridFunction& f) {
    if (f.size() < 2) {
        throw SizeError("delta derivative needs at least 2 points, window has " +
                        std::to_string(f.size()));
    }
    const TimeScale& ts = *f.scale();
    std::vector<double> v(f.size() - 1);
    for (std::size_t i = f.lo(); i < f.hi(); ++i) {
        v[i - f.lo()] = (f.at(i + 1) - f.at(i)) / ts.mu(i);
    }
    return GridFunction(f.scale(), f.lo(), std::move(v));
}

GridFunction delta_derivative_n(const GridFunction& f, std::size_t k) {
    if (f.size() < k + 1) {
        throw SizeError("delta derivative of order " + std::to_string(k) +
                        " needs at least " + std::to_string(k + 1) + " points, window has " +
                        std::to_string(f.size()));
    }
    GridFunction g = f;
    for (std::size_t step = 0; step < k; ++step) g = delta_derivative(g);
    return g;
}

GridFunction shift_sigma(const GridFunction& f, std::size_t i) {
    if (f.size() < i + 1) {
        throw SizeError("sigma^" + std::to_string(i) + " shift needs at least " +
                        std::to_string(i + 1) + " points, window has " +
                        std::to_string(f.size()));
    }
    std::vector<double> v(f.size() - i);
    for (std::size_t j = f.lo(); j <= f.hi() - i; ++j) v[j - f.lo()] = f.at(j + i);
    return GridFunction(f.scale(), f.lo(), std::move(v));
}

GridFunction compose_sigma_delta(const GridFunction& y, std::size_t i, std::size_t j) {
    if (y.size() < i + j + 1) {
        throw SizeError("composition sigma^" + std::to_string(i) + " Delta^" +
                        std::to_string(j) + " needs at least " + std::to_string(i + j + 1) +
                        " points, window has " + std::to_string(y.size()));
    }
    return delta_derivative_n(shift_sigma(y, i), j);
}

double delta_integral(const GridFunction& f, std::size_t from, std::size_t to) {
    if (from < f.lo() || to > f.hi() || from > to) {
        throw ValidationError("integration range [" + std::to_string(from) + ", " +
                              std::to_string(to) + "] outside window [" +
                              std::to_string(f.lo()) + ", " + std::to_string(f.hi()) + "]");
    }
    const TimeScale& ts = *f.scale();
    double acc = 0.0;
    for (std::size_t i = from; i < to; ++i) acc += ts.mu(i) * f.at(i);
    return acc;
}

IdentityResidual check_transfor(const GridFunction& f) {
    const GridFunction fs = shift_sigma(f, 1);
    const GridFunction fd = delta_derivative(f);
    const TimeScale& ts = *f.scale();
    IdentityResidual r{0.0, 1.0 + f.max_abs()};
    for (std::size_t i = f.lo(); i < f.hi(); ++i) {
        r.max_abs = std::max(r.max_abs, std::abs(fs.at(i) - f.at(i) - ts.mu(i) * fd.at(i)));
    }
    return r;
}

IdentityResidual check_product_rule(const GridFunction& f, const GridFunction& g) {
    const GridFunction fg = pointwise_product(f, g);
    if (fg.size() < 2) throw SizeError("product rule check needs at least 2 shared points");
    const GridFunction lhs = delta_derivative(fg);
    const GridFunction fd = delta_derivative(f.slice(fg.lo(), fg.hi()));
    const GridFunction gd = delta_derivative(g.slice(fg.lo(), fg.hi()));
    const GridFunction fs = shift_sigma(f.slice(fg.lo(), fg.hi()), 1);
    const GridFunction gs = shift_sigma(g.slice(fg.lo(), fg.hi()), 1);

    IdentityResidual r{0.0, 1.0 + lhs.max_abs()};
    for (std::size_t i = lhs.lo(); i <= lhs.hi(); ++i) {
        const double form1 = fd.at(i) * gs.at(i) + f.at(i) * gd.at(i);
        const double form2 = fd.at(i) * g.at(i) + fs.at(i) * gd.at(i);
        r.max_abs = std::max({r.max_abs, std::abs(lhs.at(i) - form1),
                              std::abs(lhs.at(i) - form2)});
    }
    return r;
}

IdentityResidual check_by_parts(const GridFunction& f, const GridFunction& g, int form) {
    if (form != 1 && form != 2) throw ValidationError("by-parts form must be 1 or 2");
    if (!same_scale(f, g)) throw ValidationError("grid functions live on different scales");
    if (f.lo() != g.lo() || f.hi() != g.hi()) {
        throw ValidationError("by-parts check requires identical windows");
    }
    if (f.size() < 2) throw SizeError("by-parts check needs at least 2 points");

    const std::size_t a = f.lo();
    const std::size_t b = f.hi();
    const GridFunction fd = delta_derivative(f);
    const GridFunction gd = delta_derivative(g);
    const double boundary = f.at(b) * g.at(b) - f.at(a) * g.at(a);

    // The integrands live on [a, b-1]; the integral over [a, b) uses exactly
    // those points.
    const auto integral = [](const GridFunction& h) {
        const TimeScale& ts = *h.scale();
        double acc = 0.0;
        for (std::size_t i = h.lo(); i <= h.hi(); ++i) acc += ts.mu(i) * h.at(i);
        return acc;
    };

    double left = 0.0;
    double right = 0.0;
    if (form == 1) {
        left = integral(pointwise_product(shift_sigma(f, 1), gd));
        right = integral(pointwise_product(fd, g.slice(a, b - 1)));
    } else {
        left = integral(pointwise_product(f.slice(a, b - 1), gd));
        right = integral(pointwise_product(fd, shift_sigma(g, 1)));
    }
    IdentityResidual r;
    r.max_abs = std::abs(left + right - boundary);
    r.scale = 1.0 + std::abs(left) + std::abs(right) + std::abs(boundary);
    return r;
}

IdentityResidual check_commutation(const GridFunction& f) {
    if (f.size() < 3) throw SizeError("commutation check needs at least 3 points");
    const GridFunction sigma_delta = delta_derivative(shift_sigma(f, 1));
    const GridFunction delta_sigma = shift_sigma(delta_derivative(f), 1);
    const double a1 = f.scale()->a1();

    IdentityResidual r{0.0, 1.0 + sigma_delta.max_abs()};
    for (std::size_t i = sigma_delta.lo(); i <= sigma_delta.hi(); ++i) {
        r.max_abs = std::max(r.max_abs, std::abs(sigma_delta.at(i) - a1 * delta_sigma.at(i)));
    }
    return r;
}

}  // namespace tsvar
