#include "agg/initial.hpp"

#include "agg/error.hpp"
#include "agg/smooth.hpp"

#include <cmath>
#include <numbers>

namespace agg {

RadialProfile gaussian_profile(double amplitude, double width, double support) {
    if (!(width > 0.0)) throw InvalidArgument("gaussian width must be positive");
    if (!(support > 0.0)) throw InvalidArgument("gaussian support must be positive");
    RadialProfile p;
    p.support_radius = support;
    p.generator = [=](double r) {
        if (r >= support) return 0.0;
        const double cut = 1.0 - smooth_step((r - 0.6 * support) / (0.4 * support));
        return amplitude * std::exp(-0.5 * r * r / (width * width)) * cut;
    };
    p.description = "gaussian A=" + std::to_string(amplitude) + " w=" + std::to_string(width) +
                    " R=" + std::to_string(support);
    return p;
}

RadialProfile patch_profile(double c, double R0, double smoothing) {
    if (!(R0 > 0.0)) throw InvalidArgument("patch radius must be positive");
    if (!(smoothing > 0.0) || 8.0 * smoothing >= R0) throw InvalidArgument("patch smoothing must lie in (0, R0/8)");
    RadialProfile p;
    const double cut = R0 + 8.0 * smoothing;  // erfc(8/sqrt 2) ~ 1e-15
    p.support_radius = cut;
    p.generator = [=](double r) {
        if (r >= cut) return 0.0;
        return 0.5 * c * std::erfc((r - R0) / (std::numbers::sqrt2 * smoothing));
    };
    p.description = "patch c=" + std::to_string(c) + " R0=" + std::to_string(R0) + " w=" + std::to_string(smoothing);
    return p;
}

ScalarField sample_radial(const Grid& grid, const RadialProfile& profile, const std::array<double, 3>& center) {
    const Eigen::MatrixXd x = grid.node_coordinates();
    ScalarField f(grid);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        double r2 = 0.0;
        for (int a = 0; a < grid.dimension(); ++a) r2 += (x(a, i) - center[a]) * (x(a, i) - center[a]);
        f.values(i) = profile(std::sqrt(r2));
    }
    return f;
}

ScalarField sample_radial(const Grid& grid, const RadialProfile& profile) {
    const double c = grid.center();
    return sample_radial(grid, profile, {c, c, c});
}

ScalarField two_bumps(const Grid& grid, double amplitude, double width, double support) {
    const double c = grid.center();
    const double off = 0.9 * support;
    ScalarField a = sample_radial(grid, gaussian_profile(amplitude, width, support), {c - off, c - 0.3 * off, c});
    const ScalarField b =
        sample_radial(grid, gaussian_profile(0.6 * amplitude, 0.7 * width, 0.7 * support), {c + off, c + 0.5 * off, c});
    a.values += b.values;
    return a;
}

}  // namespace agg
