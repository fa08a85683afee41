#pragma once

#include "agg/grid.hpp"
#include "agg/params.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace agg {

/// Radial function sampled on ascending radii, optionally backed by the
/// closed-form generator it was sampled from.
struct RadialProfile {
    std::vector<double> radii;
    std::vector<double> values;
    std::function<double(double)> generator;
    double support_radius = 0.0;  ///< 0 when the profile is not compactly supported
    std::string description;

    /// Generator if present, otherwise linear interpolation (0 beyond the last radius).
    double operator()(double r) const;

    void validate() const;
};

/// C-infinity bump A exp(-1/(1-(r/r0)^2)) normalized to the given mass in R^d.
RadialProfile bump_profile(double r0, int dimension = 2, double mass = 1.0, int samples = 257);

/// Periodic velocity σ1 ∇Φ * ρ with the zero mode removed:
/// v̂_j = -σ1 i ξ_j ρ̂ / |ξ|^2, v̂(0) = 0.
VectorField solve_velocity(const ScalarField& rho, double sigma1);

/// ∂_i ∂_j Φ * ρ on the torus: symbol ξ_i ξ_j / |ξ|^2, zero mode removed.
ScalarField potential_hessian(const ScalarField& rho, int i, int j);

/// Linear field σ1 (m / L^d) (x - c) / d restoring the mass removed with the zero mode.
VectorField mean_field_velocity(const Grid& grid, double mass, double sigma1, double time = 0.0);

/// Velocity used by the solvers: solve_velocity, plus the mean field when enabled.
VectorField advecting_velocity(const ScalarField& rho, const SimParams& p);

/// f(r) = r^-2 ∫_0^r η g0(η) dη by refined composite Simpson; f(0) = g0(0)/2.
double tau0_radial_factor(const RadialProfile& g0, double r);

/// τ0(x) = f(|x - c|)(x - c) for a unit-mass radial g0 in 2D.
VectorField corrector_tau0(const RadialProfile& g0, const Grid& grid);

/// θ = σ1 m(μ) τ0.
VectorField corrector_theta(double mu_mass, double sigma1, const VectorField& tau0);

/// Sampled sup |v(x) - v(y)| / (|x - y| (1 - log|x - y|)) over pairs with |x - y| <= 1.
///
/// Pairs are drawn from a seeded generator and kept inside the box interior, so
/// the first k pairs of a larger sample are the k pairs of a smaller one.
double log_lipschitz_modulus(const VectorField& v, int n_pairs, std::uint64_t seed);

}  // namespace agg
