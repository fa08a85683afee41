#pragma once

#include "agg/grid.hpp"
#include "agg/params.hpp"
#include "agg/trajectory.hpp"

#include <span>
#include <vector>

namespace agg {

/// Largest step accepted by step_viscous for this state:
/// min(cfl h / max(|v|_inf, ε_v), 0.5 / (|σ2| ||ρ||_inf)).
double admissible_viscous_dt(const ScalarField& rho, const SimParams& p);

/// One integrating-factor RK4 step of ∂t ρ + v·∇ρ = σ2 ρ² + ν Δρ.
///
/// Diffusion is integrated exactly by exp(-ν|ξ|² τ); the nonlinear term
/// -v·∇ρ + σ2 ρ² is evaluated pseudo-spectrally with 2/3-rule dealiasing of
/// its inputs and its output. Throws StepTooLarge or BlowupImminent.
ScalarField step_viscous(const ScalarField& rho, const SimParams& p, double dt);

/// Integrates from rho0.time = 0 to p.t_end, halving the step on StepTooLarge.
Trajectory run_viscous(const ScalarField& rho0, const SimParams& p, std::span<const Observer> observers = {});

/// Picard iterates ρ_0 .. ρ_n of the linearized problems
///   v_n = σ1 ∇Φ * ρ_{n-1},  ∂t ρ_n + v_n·∇ρ_n = σ2 ρ_{n-1} ρ_n + ν Δρ_n,  ρ_n(0) = ρ0.
///
/// Iterate 0 is ρ0 held constant. Every iterate uses the same uniform step
/// (t_end divided into ceil(t_end / p.dt) steps) and keeps a snapshot at every
/// step; ρ_{n-1} is interpolated linearly in time between its snapshots.
std::vector<Trajectory> picard_iterate(const ScalarField& rho0, const SimParams& p, double t_end, int n_iter);

/// max_k ||a(t_k) - b(t_k)|| over matching snapshots (the L∞(0,T; L²) distance).
double sup_l2_distance(const Trajectory& a, const Trajectory& b);

}  // namespace agg
