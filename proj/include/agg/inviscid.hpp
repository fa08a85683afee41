#pragma once

#include "agg/grid.hpp"
#include "agg/params.hpp"
#include "agg/trajectory.hpp"

#include <span>

namespace agg {

/// One-step departure points of the backward characteristics through every node.
struct FlowMapSample {
    Eigen::MatrixXd departure;  ///< d x N, wrapped into [0, L)^d
    int order = 4;
    double dt = 0.0;
};

/// RK4 on ẏ = -v(t_{n+1} - s, y), s in [0, dt], starting at each node.
///
/// v over the step is extrapolated linearly in time from v_prev (one step
/// back) and v_now; pass v_now twice for a frozen field. Space interpolation
/// is cubic. Throws StepTooLarge if dt > cfl h / max|v|.
FlowMapSample trace_back(const VectorField& v_now, const VectorField& v_prev, double dt, double cfl = 1.0);

/// Moves arbitrary points forward by one RK4 step of ẏ = v(t_n + s, y) with the
/// same time extrapolation as trace_back. points is d x m; not wrapped.
Eigen::MatrixXd advance_points(const Eigen::Ref<const Eigen::MatrixXd>& points, const VectorField& v_now,
                               const VectorField& v_prev, double dt);

/// Semi-Lagrangian step with a frozen velocity (v_prev = v_now).
ScalarField step_inviscid(const ScalarField& rho, const SimParams& p, double dt);

/// Self-consistent stepper that keeps the previous velocity for the time
/// extrapolation inside trace_back. The first step has no history and takes a
/// frozen-velocity trial step to estimate v at its end.
class InviscidStepper {
public:
    InviscidStepper(ScalarField rho0, SimParams p);

    /// Advances by dt: departure interpolation, then ρ_d / (1 - σ2 dt ρ_d).
    /// Throws StepTooLarge or BlowupImminent and leaves the state untouched.
    const ScalarField& step(double dt);

    const ScalarField& state() const { return rho_; }
    const VectorField& velocity() const { return v_now_; }
    const VectorField& previous_velocity() const { return v_prev_; }
    double admissible_dt() const;

private:
    SimParams p_;
    ScalarField rho_;
    VectorField v_now_;
    VectorField v_prev_;
    bool has_prev_ = false;
};

/// Integrates to p.t_end, halving the step on StepTooLarge. For ρ0 >= 0 the
/// run throws PositivityViolated once min ρ < -positivity_floor ||ρ0||_inf.
Trajectory run_inviscid(const ScalarField& rho0, const SimParams& p, std::span<const Observer> observers = {});

/// Volume stretch det ∇X(t) of a particle with initial density rho0_val:
/// (1 - σ2 t ρ0)^(-σ1/σ2), or exp(σ1 ρ0 t) when σ2 = 0. Throws DomainError at blow-up.
double jacobian_along_flow(double rho0_val, double sigma1, double sigma2, double t);

}  // namespace agg
