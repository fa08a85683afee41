#pragma once

#include "agg/grid.hpp"

#include <vector>

namespace agg {

/// Periodic tensor-product cubic interpolation from grid samples.
///
/// Each axis uses the 4-point Lagrange stencil {i-1, i, i+1, i+2} around the
/// containing cell, so polynomials of degree <= 3 along an axis are reproduced
/// exactly and the error on smooth data is O(h^4). Query points are wrapped
/// into [0, L)^d first.
Eigen::ArrayXd interpolate(const ScalarField& f, const Eigen::Ref<const Eigen::MatrixXd>& points);

/// Interpolates every component at once; returns m x d.
Eigen::ArrayXXd interpolate(const VectorField& v, const Eigen::Ref<const Eigen::MatrixXd>& points);

/// Interpolates several sample arrays defined on one grid at the same points.
/// Each column of `samples` is one field; returns m x columns.
Eigen::ArrayXXd interpolate_columns(const Grid& grid, const Eigen::Ref<const Eigen::ArrayXXd>& samples,
                                    const Eigen::Ref<const Eigen::MatrixXd>& points);

/// Wraps coordinates into [0, L).
double wrap_coordinate(double x, double length);

}  // namespace agg
