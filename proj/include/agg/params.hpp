#pragma once

namespace agg {

/// Coefficients and numerical controls of a run.
///
/// The equation is  ∂t ρ + v·∇ρ = σ2 ρ² + ν Δρ,  v = σ1 ∇Φ * ρ.
struct SimParams {
    double sigma1 = -1.0;
    double sigma2 = 1.0;
    double nu = 1e-3;
    double dt = 0.01;
    double t_end = 0.5;
    double cfl = 0.5;
    double blowup_guard = 0.1;

    /// Velocity floor ε_v in the CFL bound h / max(|v|_inf, ε_v).
    double velocity_floor = 1e-12;

    /// Add the linear field σ1 (m/L^d)(x - c)/d that the zero-mode deletion
    /// removes, so that div v = σ1 ρ holds on the whole box.
    bool mean_field = true;

    // Term switches; only tests turn these off.
    bool advection = true;
    bool reaction = true;

    /// Keep a snapshot every this many steps (0: initial and final only).
    int snapshot_every = 0;

    /// Inviscid runs fail if min ρ < -positivity_floor * |ρ0|_inf for ρ0 >= 0.
    double positivity_floor = 1e-3;

    /// Throws InvalidArgument when an invariant fails.
    void validate() const;

    /// Time at which |σ2| t ||ρ0||_inf reaches 1 - blowup_guard (infinite if σ2 = 0).
    double guarded_horizon(double rho0_sup) const;
};

}  // namespace agg
