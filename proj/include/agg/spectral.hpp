#pragma once

#include "agg/grid.hpp"

#include <memory>

namespace agg {

/// Per-grid Fourier multipliers, shared between all operators.
///
/// The derivative symbol of the Nyquist index k_j = -n/2 is zero, so every
/// operator here is a product of first-derivative symbols: iξ_j for
/// derivatives, -|ξ|^2 = -Σ ξ_j^2 for the Laplacian. This keeps
/// div(grad f) = lap f exact coefficient by coefficient.
struct SpectralSymbols {
    Eigen::ArrayXXd xi;         ///< N x d physical wavevectors
    Eigen::ArrayXd xi_squared;  ///< |ξ|^2
    Eigen::ArrayXd xi_norm;     ///< |ξ|, Nyquist included (used for band analysis)
    Eigen::Array<bool, Eigen::Dynamic, 1> retained;  ///< 2/3-rule mask
};

/// Cached symbol tables for a grid; thread-safe.
std::shared_ptr<const SpectralSymbols> spectral_symbols(const Grid& grid);

SpectralField forward_transform(const ScalarField& f);

/// Real part of the inverse transform.
ScalarField inverse_transform(const SpectralField& s, double time = 0.0);

VectorField spectral_gradient(const ScalarField& f);
VectorField spectral_gradient(const SpectralField& s, double time = 0.0);
ScalarField spectral_laplacian(const ScalarField& f);
ScalarField spectral_divergence(const VectorField& v);

/// Zero every coefficient with some |k_j| > n/3.
SpectralField dealias(const SpectralField& s);
void dealias_in_place(SpectralField& s);

/// Inner product h^d Σ f g.
double inner_product(const ScalarField& f, const ScalarField& g);

}  // namespace agg
