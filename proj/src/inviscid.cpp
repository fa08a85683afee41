#include "agg/inviscid.hpp"

#include "agg/error.hpp"
#include "agg/interpolate.hpp"
#include "agg/velocity.hpp"

#include <algorithm>
#include <cmath>

namespace agg {
namespace {

/// Evaluates (1 + θ) v_now - θ v_prev at the given points for both stacked fields.
class ExtrapolatedVelocity {
public:
    ExtrapolatedVelocity(const VectorField& v_now, const VectorField& v_prev)
        : grid_(v_now.grid), d_(v_now.dimension()), stacked_(v_now.grid.size(), 2 * v_now.dimension()) {
        if (v_now.grid != v_prev.grid) throw MisalignedGrids("velocity fields on different grids");
        stacked_.leftCols(d_) = v_now.components;
        stacked_.rightCols(d_) = v_prev.components;
    }

    /// θ is the fraction of a step past t_n; result is d x m.
    Eigen::MatrixXd operator()(const Eigen::MatrixXd& y, double theta) const {
        const Eigen::ArrayXXd both = interpolate_columns(grid_, stacked_, y);
        return ((1.0 + theta) * both.leftCols(d_) - theta * both.rightCols(d_)).matrix().transpose();
    }

private:
    Grid grid_;
    int d_;
    Eigen::ArrayXXd stacked_;
};

void wrap_points(Eigen::MatrixXd& pts, double length) {
    for (Eigen::Index c = 0; c < pts.cols(); ++c) {
        for (Eigen::Index a = 0; a < pts.rows(); ++a) pts(a, c) = wrap_coordinate(pts(a, c), length);
    }
}

double positivity_threshold(const ScalarField& rho0, const SimParams& p) {
    if (rho0.values.size() == 0 || rho0.values.minCoeff() < 0.0) return -kInfinity;
    return -p.positivity_floor * rho0.values.abs().maxCoeff();
}

}  // namespace

FlowMapSample trace_back(const VectorField& v_now, const VectorField& v_prev, double dt, double cfl) {
    if (!(dt > 0.0)) throw InvalidArgument("trace_back requires dt > 0");
    const double vmax = std::max(v_now.max_magnitude(), v_prev.max_magnitude());
    const double admissible = vmax > 0.0 ? cfl * v_now.grid.spacing() / vmax : kInfinity;
    if (dt > admissible * (1.0 + 1e-12)) throw StepTooLarge(dt, admissible);

    const ExtrapolatedVelocity v(v_now, v_prev);
    const Eigen::MatrixXd x = v_now.grid.node_coordinates();
    // s runs backward from t_{n+1} (θ = 1) to t_n (θ = 0)
    const Eigen::MatrixXd k1 = -v(x, 1.0);
    const Eigen::MatrixXd k2 = -v(x + 0.5 * dt * k1, 0.5);
    const Eigen::MatrixXd k3 = -v(x + 0.5 * dt * k2, 0.5);
    const Eigen::MatrixXd k4 = -v(x + dt * k3, 0.0);

    FlowMapSample out;
    out.dt = dt;
    out.departure = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    wrap_points(out.departure, v_now.grid.box_length());
    return out;
}

Eigen::MatrixXd advance_points(const Eigen::Ref<const Eigen::MatrixXd>& points, const VectorField& v_now,
                               const VectorField& v_prev, double dt) {
    const ExtrapolatedVelocity v(v_now, v_prev);
    const Eigen::MatrixXd x = points;
    const Eigen::MatrixXd k1 = v(x, 0.0);
    const Eigen::MatrixXd k2 = v(x + 0.5 * dt * k1, 0.5);
    const Eigen::MatrixXd k3 = v(x + 0.5 * dt * k2, 0.5);
    const Eigen::MatrixXd k4 = v(x + dt * k3, 1.0);
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

ScalarField semi_lagrangian_update(const ScalarField& rho, const VectorField& v_now, const VectorField& v_prev,
                                   const SimParams& p, double dt) {
    const double sup = rho.values.abs().maxCoeff();
    if (p.sigma2 != 0.0 && 1.0 - std::abs(p.sigma2) * dt * sup < p.blowup_guard) {
        throw BlowupImminent("1 - |sigma2| dt ||rho||_inf fell below blowup_guard");
    }
    ScalarField out(rho.grid, rho.time + dt);
    if (p.advection) {
        const FlowMapSample map = trace_back(v_now, v_prev, dt, p.cfl);
        out.values = interpolate(rho, map.departure);
    } else {
        out.values = rho.values;
    }
    if (p.reaction && p.sigma2 != 0.0) out.values = out.values / (1.0 - p.sigma2 * dt * out.values);
    if (!out.values.isFinite().all()) throw BlowupImminent("non-finite density after inviscid step");
    return out;
}

}  // namespace

ScalarField step_inviscid(const ScalarField& rho, const SimParams& p, double dt) {
    rho.validate();
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    const VectorField v = advecting_velocity(rho, p);
    return semi_lagrangian_update(rho, v, v, p, dt);
}

InviscidStepper::InviscidStepper(ScalarField rho0, SimParams p) : p_(p), rho_(std::move(rho0)) {
    p_.validate();
    rho_.validate();
    v_now_ = advecting_velocity(rho_, p_);
    v_prev_ = v_now_;
}

double InviscidStepper::admissible_dt() const {
    const double vmax = std::max(v_now_.max_magnitude(), p_.velocity_floor);
    double dt = p_.cfl * rho_.grid.spacing() / vmax;
    const double sup = rho_.values.abs().maxCoeff();
    if (p_.sigma2 != 0.0 && sup > 0.0) dt = std::min(dt, 0.5 / (std::abs(p_.sigma2) * sup));
    return dt;
}

const ScalarField& InviscidStepper::step(double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    const double admissible = admissible_dt();
    if (dt > admissible * (1.0 + 1e-12)) throw StepTooLarge(dt, admissible);
    if (!has_prev_) {
        // no history yet: a frozen-velocity trial step gives v at t + dt, and
        // v_prev is chosen so the linear extrapolation passes through it
        const ScalarField trial = semi_lagrangian_update(rho_, v_now_, v_now_, p_, dt);
        const VectorField v_trial = advecting_velocity(trial, p_);
        v_prev_.components = 2.0 * v_now_.components - v_trial.components;
    }
    ScalarField next = semi_lagrangian_update(rho_, v_now_, v_prev_, p_, dt);
    VectorField v_next = advecting_velocity(next, p_);
    v_prev_ = std::move(v_now_);
    v_now_ = std::move(v_next);
    rho_ = std::move(next);
    has_prev_ = true;
    return rho_;
}

Trajectory run_inviscid(const ScalarField& rho0, const SimParams& p, std::span<const Observer> observers) {
    p.validate();
    rho0.validate();
    const double sup0 = rho0.values.abs().maxCoeff();
    const double horizon = p.guarded_horizon(sup0);
    if (p.t_end > horizon * (1.0 + 1e-12)) {
        throw BlowupImminent("t_end=" + std::to_string(p.t_end) + " exceeds the guarded existence horizon " +
                             std::to_string(horizon) + " (|sigma2| t ||rho0||_inf > 1 - blowup_guard)");
    }
    const double floor = positivity_threshold(rho0, p);

    ScalarField start = rho0;
    start.time = 0.0;
    Trajectory traj;
    detail::Recorder rec(traj, observers, p.snapshot_every);
    rec.initial(start);
    InviscidStepper stepper(start, p);

    int step = 0;
    ScalarField cur = start;
    const double eps = 1e-12 * std::max(1.0, p.t_end);
    while (cur.time < p.t_end - eps) {
        double dt = std::min(p.dt, p.t_end - cur.time);
        for (int attempt = 0;; ++attempt) {
            try {
                stepper.step(dt);
                break;
            } catch (const StepTooLarge&) {
                if (attempt > 40) throw;
                dt *= 0.5;
            }
        }
        ++step;
        cur = stepper.state();
        if (p.t_end - cur.time < eps) cur.time = p.t_end;
        const double lowest = cur.values.minCoeff();
        if (lowest < floor) {
            throw PositivityViolated("min rho = " + std::to_string(lowest) + " at t = " + std::to_string(cur.time) +
                                     " below -positivity_floor * ||rho0||_inf");
        }
        rec.step(cur, step);
    }
    rec.finish(cur, step);
    return traj;
}

double jacobian_along_flow(double rho0_val, double sigma1, double sigma2, double t) {
    if (sigma2 == 0.0) return std::exp(sigma1 * rho0_val * t);
    const double base = 1.0 - sigma2 * t * rho0_val;
    if (!(base > 0.0)) throw DomainError("blow-up denominator 1 - sigma2 t rho0 is nonpositive");
    return std::pow(base, -sigma1 / sigma2);
}

}  // namespace agg
