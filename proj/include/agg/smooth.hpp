#pragma once

#include <cmath>
#include <functional>

namespace agg {

/// C-infinity transition: 0 for u <= 0, 1 for u >= 1, 1/2 at u = 1/2.
inline double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u);
    const double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

/// Radial plateau: 1 on |x| <= 1, 0 on |x| >= 2, nonincreasing in between.
inline double plateau(double r) { return 1.0 - smooth_step(r - 1.0); }

/// Unnormalized bump exp(-1/(1-s^2)) for s < 1, else 0.
inline double bump_shape(double s) {
    if (s >= 1.0 || s <= -1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
}

/// Composite Simpson on [a, b], doubling the panel count from `panels`
/// until successive estimates differ by less than `tol` (absolute).
double simpson(const std::function<double(double)>& f, double a, double b, int panels = 4096,
               double tol = 1e-10, int max_doublings = 8);

}  // namespace agg
