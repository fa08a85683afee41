#pragma once

#include "agg/grid.hpp"
#include "agg/velocity.hpp"

#include <array>

namespace agg {

/// A exp(-r²/(2w²)) multiplied by a smooth cutoff that is 1 for r <= 0.6 R and
/// 0 for r >= R. R is the support radius.
RadialProfile gaussian_profile(double amplitude, double width, double support);

/// Indicator of the disc of radius R0 mollified by a Gaussian of standard
/// deviation w: (c/2) erfc((r - R0)/(sqrt(2) w)), set to 0 beyond R0 + 8w.
RadialProfile patch_profile(double c, double R0, double smoothing);

/// Samples a radial profile about a point of the box (the center by default).
ScalarField sample_radial(const Grid& grid, const RadialProfile& profile, const std::array<double, 3>& center);
ScalarField sample_radial(const Grid& grid, const RadialProfile& profile);

/// Two truncated Gaussians of unequal amplitude and width, offset from the center
/// along different directions so that no symmetry axis survives.
ScalarField two_bumps(const Grid& grid, double amplitude, double width, double support);

}  // namespace agg
