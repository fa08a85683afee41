#include "agg/viscous.hpp"

#include "agg/error.hpp"
#include "agg/fft.hpp"
#include "agg/spectral.hpp"
#include "agg/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace agg {
namespace {

using Nonlinear = std::function<void(double t, const Eigen::ArrayXcd& state, Eigen::ArrayXcd& out)>;

/// Integrating-factor (Lawson) RK4 on the spectral state.
Eigen::ArrayXcd lawson_rk4(const Grid& grid, const Eigen::ArrayXcd& u, double t, double dt, double nu,
                           const Nonlinear& nonlinear) {
    const auto sym = spectral_symbols(grid);
    const Eigen::ArrayXd full = (-nu * dt * sym->xi_squared).exp();
    const Eigen::ArrayXd half = (-0.5 * nu * dt * sym->xi_squared).exp();
    Eigen::ArrayXcd k1(u.size()), k2(u.size()), k3(u.size()), k4(u.size());

    nonlinear(t, u, k1);
    const Eigen::ArrayXcd a = half * (u + 0.5 * dt * k1);
    nonlinear(t + 0.5 * dt, a, k2);
    const Eigen::ArrayXcd b = half * u + 0.5 * dt * k2;
    nonlinear(t + 0.5 * dt, b, k3);
    const Eigen::ArrayXcd c = full * u + dt * half * k3;
    nonlinear(t + dt, c, k4);
    return full * u + (dt / 6.0) * (full * k1 + 2.0 * half * (k2 + k3) + k4);
}

/// Offsets x_a - c of every node as an N x d array.
Eigen::ArrayXXd centered_coordinates(const Grid& grid) {
    return (grid.node_coordinates().array() - grid.center()).transpose();
}

/// N(ρ) = -v(ρ)·∇ρ + σ2 ρ² with v the advecting velocity of ρ itself.
class SelfConsistentTerm {
public:
    SelfConsistentTerm(const Grid& grid, const SimParams& p)
        : grid_(grid), p_(p), sym_(spectral_symbols(grid)), offsets_(centered_coordinates(grid)),
          inv_laplace_((sym_->xi_squared > 0.0).select(-p.sigma1 / sym_->xi_squared, 0.0)) {}

    void operator()(double /*t*/, const Eigen::ArrayXcd& state, Eigen::ArrayXcd& out) const {
        const std::complex<double> zero(0.0, 0.0);
        const std::complex<double> i(0.0, 1.0);
        const Eigen::ArrayXcd u = sym_->retained.select(state, zero);

        Eigen::ArrayXcd buf = u;
        fft_inverse(grid_, buf);
        const Eigen::ArrayXd rho = buf.real();
        Eigen::ArrayXd product = Eigen::ArrayXd::Zero(rho.size());

        if (p_.advection) {
            const double mass = u(0).real() * grid_.cell_volume();
            const double slope =
                p_.mean_field ? p_.sigma1 * mass / (grid_.box_volume() * grid_.dimension()) : 0.0;
            const Eigen::ArrayXcd potential = u * inv_laplace_;
            for (int a = 0; a < grid_.dimension(); ++a) {
                const Eigen::ArrayXcd ik = i * sym_->xi.col(a).cast<std::complex<double>>();
                buf = ik * u;
                fft_inverse(grid_, buf);
                const Eigen::ArrayXd grad = buf.real();
                buf = ik * potential;
                fft_inverse(grid_, buf);
                product -= (buf.real() + slope * offsets_.col(a)) * grad;
            }
        }
        if (p_.reaction) product += p_.sigma2 * rho.square();

        out = product.cast<std::complex<double>>();
        fft_forward(grid_, out);
        out = sym_->retained.select(out, zero);
    }

private:
    Grid grid_;
    SimParams p_;
    std::shared_ptr<const SpectralSymbols> sym_;
    Eigen::ArrayXXd offsets_;
    Eigen::ArrayXd inv_laplace_;
};

/// N(ρ) = -v_bg(t)·∇ρ + σ2 ρ_bg(t) ρ with a stored background trajectory.
class FrozenBackgroundTerm {
public:
    FrozenBackgroundTerm(const Trajectory& background, const SimParams& p)
        : grid_(background.snapshots.front().grid), p_(p), sym_(spectral_symbols(grid_)) {
        for (const auto& snap : background.snapshots) {
            times_.push_back(snap.time);
            rho_.push_back(snap.values);
            velocity_.push_back(advecting_velocity(snap, p).components);
        }
    }

    double max_speed() const {
        double best = 0.0;
        for (const auto& v : velocity_) best = std::max(best, v.square().rowwise().sum().sqrt().maxCoeff());
        return best;
    }

    void operator()(double t, const Eigen::ArrayXcd& state, Eigen::ArrayXcd& out) const {
        const std::complex<double> zero(0.0, 0.0);
        const std::complex<double> i(0.0, 1.0);
        const Eigen::ArrayXcd u = sym_->retained.select(state, zero);

        // linear interpolation weight between stored snapshots
        std::size_t hi = std::upper_bound(times_.begin(), times_.end(), t) - times_.begin();
        hi = std::clamp<std::size_t>(hi, 1, times_.size() - 1);
        const std::size_t lo = hi - 1;
        const double span = times_[hi] - times_[lo];
        const double w = span > 0.0 ? std::clamp((t - times_[lo]) / span, 0.0, 1.0) : 0.0;

        Eigen::ArrayXcd buf = u;
        fft_inverse(grid_, buf);
        const Eigen::ArrayXd rho = buf.real();
        Eigen::ArrayXd product = Eigen::ArrayXd::Zero(rho.size());
        if (p_.advection) {
            for (int a = 0; a < grid_.dimension(); ++a) {
                buf = i * sym_->xi.col(a).cast<std::complex<double>>() * u;
                fft_inverse(grid_, buf);
                const Eigen::ArrayXd v = (1.0 - w) * velocity_[lo].col(a) + w * velocity_[hi].col(a);
                product -= v * buf.real();
            }
        }
        if (p_.reaction) {
            product += p_.sigma2 * ((1.0 - w) * rho_[lo] + w * rho_[hi]) * rho;
        }
        out = product.cast<std::complex<double>>();
        fft_forward(grid_, out);
        out = sym_->retained.select(out, zero);
    }

private:
    Grid grid_;
    SimParams p_;
    std::shared_ptr<const SpectralSymbols> sym_;
    std::vector<double> times_;
    std::vector<Eigen::ArrayXd> rho_;
    std::vector<Eigen::ArrayXXd> velocity_;
};

void check_horizon(const ScalarField& rho0, const SimParams& p, double t_end) {
    const double sup = rho0.values.abs().maxCoeff();
    const double horizon = p.guarded_horizon(sup);
    if (t_end > horizon * (1.0 + 1e-12)) {
        throw BlowupImminent("t_end=" + std::to_string(t_end) + " exceeds the guarded existence horizon " +
                             std::to_string(horizon) + " (|sigma2| t ||rho0||_inf > 1 - blowup_guard)");
    }
}

}  // namespace

double admissible_viscous_dt(const ScalarField& rho, const SimParams& p) {
    const double vmax = advecting_velocity(rho, p).max_magnitude();
    double dt = p.cfl * rho.grid.spacing() / std::max(vmax, p.velocity_floor);
    const double sup = rho.values.abs().maxCoeff();
    if (p.sigma2 != 0.0 && sup > 0.0) dt = std::min(dt, 0.5 / (std::abs(p.sigma2) * sup));
    return dt;
}

ScalarField step_viscous(const ScalarField& rho, const SimParams& p, double dt) {
    rho.validate();
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    const double sup = rho.values.abs().maxCoeff();
    if (p.sigma2 != 0.0 && 1.0 - std::abs(p.sigma2) * dt * sup < p.blowup_guard) {
        throw BlowupImminent("1 - |sigma2| dt ||rho||_inf fell below blowup_guard");
    }
    const double admissible = admissible_viscous_dt(rho, p);
    if (dt > admissible * (1.0 + 1e-12)) throw StepTooLarge(dt, admissible);

    const SelfConsistentTerm term(rho.grid, p);
    Eigen::ArrayXcd u = rho.values.cast<std::complex<double>>();
    fft_forward(rho.grid, u);
    Eigen::ArrayXcd next = lawson_rk4(rho.grid, u, rho.time, dt, p.nu, std::cref(term));
    fft_inverse(rho.grid, next);
    ScalarField out(rho.grid, rho.time + dt);
    out.values = next.real();
    if (!out.values.isFinite().all()) throw BlowupImminent("non-finite density after viscous step");
    return out;
}

Trajectory run_viscous(const ScalarField& rho0, const SimParams& p, std::span<const Observer> observers) {
    p.validate();
    rho0.validate();
    check_horizon(rho0, p, p.t_end);

    Trajectory traj;
    detail::Recorder rec(traj, observers, p.snapshot_every);
    ScalarField cur = rho0;
    cur.time = 0.0;
    rec.initial(cur);

    int step = 0;
    const double eps = 1e-12 * std::max(1.0, p.t_end);
    while (cur.time < p.t_end - eps) {
        double dt = std::min(p.dt, p.t_end - cur.time);
        for (int attempt = 0;; ++attempt) {
            try {
                ScalarField next = step_viscous(cur, p, dt);
                if (p.t_end - next.time < eps) next.time = p.t_end;
                cur = std::move(next);
                break;
            } catch (const StepTooLarge& e) {
                if (attempt > 40) throw;
                dt *= 0.5;
            }
        }
        ++step;
        rec.step(cur, step);
    }
    rec.finish(cur, step);
    return traj;
}

std::vector<Trajectory> picard_iterate(const ScalarField& rho0, const SimParams& p, double t_end, int n_iter) {
    p.validate();
    rho0.validate();
    if (n_iter < 1) throw InvalidArgument("picard_iterate requires n_iter >= 1");
    if (!(t_end > 0.0)) throw InvalidArgument("picard_iterate requires t_end > 0");
    check_horizon(rho0, p, t_end);

    const int steps = std::max(1, static_cast<int>(std::ceil(t_end / p.dt - 1e-9)));
    const double dt = t_end / steps;

    std::vector<Trajectory> iterates;
    iterates.reserve(n_iter + 1);

    Trajectory zero;
    {
        detail::Recorder rec(zero, {}, 1);
        ScalarField cur = rho0;
        cur.time = 0.0;
        rec.initial(cur);
        for (int s = 1; s <= steps; ++s) {
            cur.time = (s == steps) ? t_end : s * dt;
            rec.step(cur, s);
        }
        rec.finish(cur, steps);
    }
    iterates.push_back(std::move(zero));

    const double sup0 = rho0.values.abs().maxCoeff();
    for (int n = 1; n <= n_iter; ++n) {
        const FrozenBackgroundTerm term(iterates.back(), p);
        const double admissible = p.cfl * rho0.grid.spacing() / std::max(term.max_speed(), p.velocity_floor);
        if (dt > admissible * (1.0 + 1e-12)) throw StepTooLarge(dt, admissible);
        if (p.sigma2 != 0.0 && dt > 0.5 / (std::abs(p.sigma2) * amplitude_envelope(sup0, p.sigma2, t_end))) {
            throw StepTooLarge(dt, 0.5 / (std::abs(p.sigma2) * amplitude_envelope(sup0, p.sigma2, t_end)));
        }

        Trajectory traj;
        detail::Recorder rec(traj, {}, 1);
        ScalarField cur = rho0;
        cur.time = 0.0;
        rec.initial(cur);
        Eigen::ArrayXcd u = cur.values.cast<std::complex<double>>();
        fft_forward(cur.grid, u);
        for (int s = 1; s <= steps; ++s) {
            const double t = (s - 1) * dt;
            u = lawson_rk4(cur.grid, u, t, dt, p.nu, std::cref(term));
            Eigen::ArrayXcd phys = u;
            fft_inverse(cur.grid, phys);
            cur.values = phys.real();
            cur.time = (s == steps) ? t_end : s * dt;
            if (!cur.values.isFinite().all()) throw BlowupImminent("non-finite density in Picard iterate");
            rec.step(cur, s);
        }
        rec.finish(cur, steps);
        iterates.push_back(std::move(traj));
    }
    return iterates;
}

double sup_l2_distance(const Trajectory& a, const Trajectory& b) {
    if (a.snapshots.size() != b.snapshots.size()) throw MisalignedGrids("trajectories have different snapshot counts");
    double best = 0.0;
    for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
        const auto& x = a.snapshots[k];
        const auto& y = b.snapshots[k];
        if (x.grid != y.grid || std::abs(x.time - y.time) > 1e-12) {
            throw MisalignedGrids("trajectory snapshots are not aligned");
        }
        best = std::max(best, std::sqrt((x.values - y.values).square().sum() * x.grid.cell_volume()));
    }
    return best;
}

}  // namespace agg
