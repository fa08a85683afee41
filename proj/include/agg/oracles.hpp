#pragma once

#include "agg/grid.hpp"
#include "agg/params.hpp"
#include "agg/velocity.hpp"

namespace agg {

// Reference solutions computed without the FFT, interpolation or time
// stepping code of the solvers.

/// v(x) = Σ_y G(x - y) ρ(y) h^d with the periodic Green's-gradient kernel
/// G_a(z) = L^-d Σ_{k != 0} (-σ1 i ξ_a / |ξ|^2) e^{i ξ·z} built by direct
/// trigonometric sums (Nyquist derivative symbol zero). Throws GridTooLarge for n > 32.
VectorField direct_convolution_velocity(const ScalarField& rho, double sigma1);

/// Inviscid radial evolution of a compactly supported radial profile by
/// material shells r_i(t), i = 0 .. n_shells, evenly spaced in initial radius.
///
/// Per shell: ṙ = σ1 Q / r^(d-1), dQ/dt = (σ1+σ2) ∫_0^r η^(d-1) ρ² dη,
/// dJ/dt = σ1 ρ J, with the carried density ρ = ρ0 / (1 - σ2 t ρ0). Enclosed
/// integrals use cumulative fourth-order quadrature in the material radius;
/// time integration is RK4 with step at most p.dt / 10. Returns ρ(t) at the
/// shell radii; d is taken from the dimension argument (2 or 3).
RadialProfile radial_reference(const RadialProfile& profile0, const SimParams& p, double t, int n_shells = 512,
                               int dimension = 2);

struct PatchState {
    double density = 0.0;
    double radius = 0.0;
};

/// Uniform disc or ball of density c and radius R0 after time t: density
/// c / (1 - σ2 t c), radius R0 J^(1/d) with log J = σ1 ∫_0^t ρ(s) ds
/// evaluated by quadrature. Throws DomainError at blow-up.
PatchState patch_reference(double c, double R0, double sigma1, double sigma2, int d, double t);

}  // namespace agg
