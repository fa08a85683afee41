#include "agg/harness.hpp"

#include "agg/diagnostics.hpp"
#include "agg/dyadic.hpp"
#include "agg/error.hpp"
#include "agg/inviscid.hpp"
#include "agg/spectral.hpp"
#include "agg/viscous.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <ostream>
#include <thread>

namespace agg {
namespace {

constexpr double kResolutionFloor = 1e-14;

SimParams run_params(const VVConfig& cfg, double nu) {
    SimParams p = cfg.base;
    p.nu = nu;
    p.t_end = cfg.t_eval;
    p.snapshot_every = 0;
    return p;
}

/// Observer recording the running sup of the C^β_* norm.
Observer holder_observer(double beta, int every, double& sup) {
    return Observer{every, [beta, &sup](const ScalarField& rho) { sup = std::max(sup, holder_star_norm(rho, beta)); }};
}

RadialProfile default_g0(const Grid& grid, double fraction) { return bump_profile(grid.box_length() * fraction); }

ScalarField difference(const ScalarField& a, const ScalarField& b) {
    if (a.grid != b.grid) throw MisalignedGrids("fields on different grids");
    return ScalarField(a.grid, a.values - b.values, a.time);
}

std::vector<std::pair<double, double>> log_pairs(const std::vector<RateRow>& rows, double RateRow::*field) {
    std::vector<std::pair<double, double>> out;
    for (const auto& r : rows) {
        if (!r.excluded) out.emplace_back(std::log(r.nu), std::log(r.*field));
    }
    return out;
}

bool distinct_nu(const std::vector<double>& nus) {
    for (std::size_t i = 1; i < nus.size(); ++i) {
        if (nus[i] != nus.front()) return true;
    }
    return false;
}

}  // namespace

void VVConfig::validate() const {
    base.validate();
    if (nu_list.empty()) throw InvalidArgument("nu_list must not be empty");
    for (std::size_t i = 0; i < nu_list.size(); ++i) {
        if (!(nu_list[i] > 0.0)) throw InvalidArgument("nu_list entries must be positive");
        if (i > 0 && nu_list[i] > nu_list[i - 1]) throw InvalidArgument("nu_list must be nonincreasing");
    }
    if (!(t_eval > 0.0)) throw InvalidArgument("t_eval must be positive");
    if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("beta must lie in (0, 1)");
    if (!(holder_beta > 0.0 && holder_beta < 1.0)) throw InvalidArgument("holder_beta must lie in (0, 1)");
    if (observe_every < 1) throw InvalidArgument("observe_every must be >= 1");
}

VVConfig vv_config_from(const RunConfig& cfg) {
    VVConfig v;
    v.base = cfg.sim;
    v.grid = cfg.grid();
    v.init = cfg.init;
    v.nu_list = cfg.nu_list;
    v.t_eval = cfg.t_eval;
    v.beta = cfg.beta;
    v.holder_beta = cfg.holder_beta;
    v.observe_every = cfg.observe_every;
    v.output_dir = cfg.output_dir;
    return v;
}

Sweep run_sweep(const VVConfig& cfg) {
    cfg.validate();
    Sweep sweep;
    sweep.rho0 = make_initial(cfg.init, cfg.grid);
    const double horizon = cfg.base.guarded_horizon(sweep.rho0.values.abs().maxCoeff());
    if (cfg.t_eval > horizon * (1.0 + 1e-12)) throw BlowupImminent("t_eval lies beyond the guarded existence horizon");

    {
        const std::vector<Observer> obs{holder_observer(cfg.holder_beta, cfg.observe_every, sweep.inviscid_holder_sup)};
        SimParams p = run_params(cfg, 0.0);
        sweep.inviscid = run_inviscid(sweep.rho0, p, obs);
    }

    sweep.viscous.resize(cfg.nu_list.size());
    auto task = [&](std::size_t k) {
        SweepRun& run = sweep.viscous[k];
        run.nu = cfg.nu_list[k];
        const std::vector<Observer> obs{holder_observer(cfg.holder_beta, cfg.observe_every, run.holder_sup)};
        run.trajectory = run_viscous(sweep.rho0, run_params(cfg, run.nu), obs);
    };
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1) {
        for (std::size_t k = 0; k < cfg.nu_list.size(); ++k) task(k);
    } else {
        // runs write disjoint slots, so completion order does not matter
        for (std::size_t start = 0; start < cfg.nu_list.size(); start += threads) {
            std::vector<std::future<void>> pending;
            for (std::size_t k = start; k < std::min<std::size_t>(start + threads, cfg.nu_list.size()); ++k) {
                pending.push_back(std::async(std::launch::async, task, k));
            }
            for (auto& f : pending) f.get();
        }
    }

    if (cfg.pilot) {
        const Grid fine(cfg.grid.dimension(), 2 * cfg.grid.points_per_axis(), cfg.grid.box_length());
        const ScalarField rho0_fine = make_initial(cfg.init, fine);
        const Trajectory fine_run = run_inviscid(rho0_fine, run_params(cfg, 0.0));
        ScalarField coarse(cfg.grid, cfg.t_eval);
        for (Eigen::Index p = 0; p < cfg.grid.size(); ++p) {
            auto idx = cfg.grid.unravel(p);
            for (auto& i : idx) i *= 2;
            coarse.values(p) = fine_run.final_state.values(fine.ravel(idx));
        }
        sweep.refinement_error = lp_norm(difference(sweep.inviscid.final_state, coarse), 2.0);
    }
    return sweep;
}

RateFit fit_rate(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 2) throw DegenerateX("fit_rate needs at least two points");
    const double n = static_cast<double>(pairs.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pairs) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : pairs) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (!(sxx > 0.0)) throw DegenerateX("fit_rate needs at least two distinct x");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (const auto& [x, y] : pairs) {
        const double e = y - (fit.intercept + fit.slope * x);
        sse += e * e;
    }
    fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return fit;
}

double h1_norm_corrected(const VectorField& w, const VectorField& theta, const RadialProfile& g0, double scale) {
    const Grid& grid = w.grid;
    if (grid.dimension() != 2) throw InvalidArgument("corrected H1 norm is defined in 2D only");
    const double hd = grid.cell_volume();
    const Eigen::ArrayXXd diff = w.components - theta.components;
    double total = diff.square().sum() * hd;

    const double h = grid.spacing();
    const double c = grid.center();
    const double outer = 1.0 / (2.0 * std::numbers::pi);
    // closed-form ∂_j (f(r) x_i) = f δ_ij + f'(r) x_i x_j / r, f' = (g0 - 2f)/r
    Eigen::ArrayXXd dtau(grid.size(), 4);
    for (Eigen::Index p = 0; p < grid.size(); ++p) {
        const auto idx = grid.unravel(p);
        const double x[2] = {idx[0] * h - c, idx[1] * h - c};
        const double r = std::hypot(x[0], x[1]);
        const bool inside = r < g0.support_radius;
        const double f = inside ? tau0_radial_factor(g0, r) : outer / (r * r);
        const double fp = r > 0.0 ? ((inside ? g0(r) : 0.0) - 2.0 * f) / r : 0.0;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                dtau(p, 2 * i + j) = (i == j ? f : 0.0) + (r > 0.0 ? fp * x[i] * x[j] / r : 0.0);
            }
        }
    }
    for (int i = 0; i < 2; ++i) {
        const VectorField grad = spectral_gradient(ScalarField(grid, w.components.col(i), w.time));
        for (int j = 0; j < 2; ++j) {
            total += (grad.components.col(j) - scale * dtau.col(2 * i + j)).square().sum() * hd;
        }
    }
    return std::sqrt(total);
}

RateReport vv_study(const VVConfig& cfg) { return vv_study(cfg, run_sweep(cfg)); }

RateReport vv_study(const VVConfig& cfg, const Sweep& sweep) {
    cfg.validate();
    const double s1 = cfg.base.sigma1;
    const double s2 = cfg.base.sigma2;
    const int d = cfg.grid.dimension();
    const bool corrector = d == 2 && s1 + s2 != 0.0;
    RateReport rep;
    rep.linf_threshold = 2.0 * cfg.beta / (2.0 * cfg.beta + d) - 0.1;
    rep.refinement_error = sweep.refinement_error;

    std::optional<VectorField> tau0;
    RadialProfile g0;
    if (corrector) {
        g0 = cfg.g0 ? *cfg.g0 : default_g0(cfg.grid, 1.0 / 16.0);
        tau0 = corrector_tau0(g0, cfg.grid);
    }

    const ScalarField& rho_inv = sweep.inviscid.final_state;
    for (const auto& run : sweep.viscous) {
        const ScalarField mu = difference(run.trajectory.final_state, rho_inv);
        RateRow row;
        row.nu = run.nu;
        row.l2_err = lp_norm(mu, 2.0);
        row.linf_err = lp_norm(mu, kInfinity);
        const VectorField w = solve_velocity(mu, s1);
        row.h1_w = h1_norm_diff(w, mu, s1).h1;
        row.mass_mu = total_mass(mu);
        row.holder = run.holder_sup;
        if (corrector) {
            const VectorField theta = corrector_theta(row.mass_mu, s1, *tau0);
            row.theta_inf = theta.max_magnitude();
            row.h1_w_tilde = h1_norm_corrected(w, theta, g0, s1 * row.mass_mu);
        }
        try {
            const MassDiffReport md = mass_diff_check(run.trajectory.ledger, sweep.inviscid.ledger, s1, s2);
            row.mass_identity_residual = md.max_residual;
        } catch (const MisalignedGrids&) {
            // ledgers on different step sequences; identity not checked
        }
        if (sweep.refinement_error && row.l2_err < 10.0 * *sweep.refinement_error) row.excluded = true;
        rep.rows.push_back(row);
    }

    for (const auto& r : rep.rows) {
        if (r.l2_err < kResolutionFloor || r.linf_err < kResolutionFloor) {
            throw FitDegenerate("error norm below 1e-14 at nu = " + format_sci(r.nu) + "; resolution floor reached");
        }
    }

    std::vector<double> used;
    for (const auto& r : rep.rows) {
        if (!r.excluded) used.push_back(r.nu);
    }
    if (used.size() < 2 || !distinct_nu(used)) {
        rep.flag = used.size() < 2 ? "fewer than two usable nu values" : "nu values are not distinct";
        return rep;
    }
    const auto l2 = log_pairs(rep.rows, &RateRow::l2_err);
    const auto linf = log_pairs(rep.rows, &RateRow::linf_err);
    const auto h1 = log_pairs(rep.rows, corrector ? &RateRow::h1_w_tilde : &RateRow::h1_w);
    rep.l2 = fit_rate(l2);
    rep.linf = fit_rate(linf);
    rep.h1 = fit_rate(h1);
    rep.fitted = true;
    return rep;
}

CorrectorReport corrector_study(const VVConfig& cfg) {
    if (cfg.base.sigma1 + cfg.base.sigma2 == 0.0) {
        throw RequiresNonconservativeCase("corrector study needs sigma1 + sigma2 != 0");
    }
    if (cfg.grid.dimension() != 2) throw InvalidArgument("corrector study is defined in 2D only");
    return corrector_study(cfg, run_sweep(cfg));
}

CorrectorReport corrector_study(const VVConfig& cfg, const Sweep& sweep) {
    const double s1 = cfg.base.sigma1;
    if (s1 + cfg.base.sigma2 == 0.0) throw RequiresNonconservativeCase("corrector study needs sigma1 + sigma2 != 0");
    if (cfg.grid.dimension() != 2) throw InvalidArgument("corrector study is defined in 2D only");

    const RadialProfile g0a = cfg.g0 ? *cfg.g0 : default_g0(cfg.grid, 1.0 / 16.0);
    const RadialProfile g0b = cfg.g0_alt ? *cfg.g0_alt : default_g0(cfg.grid, 1.0 / 24.0);
    const VectorField tau_a = corrector_tau0(g0a, cfg.grid);
    const VectorField tau_b = corrector_tau0(g0b, cfg.grid);

    CorrectorReport rep;
    const ScalarField& rho_inv = sweep.inviscid.final_state;
    std::vector<std::pair<double, double>> pairs;
    std::vector<double> nus;
    for (const auto& run : sweep.viscous) {
        const ScalarField mu = difference(run.trajectory.final_state, rho_inv);
        const VectorField w = solve_velocity(mu, s1);
        CorrectorRow row;
        row.nu = run.nu;
        row.mass_mu = total_mass(mu);

        const VectorField theta_a = corrector_theta(row.mass_mu, s1, tau_a);
        const VectorField theta_b = corrector_theta(row.mass_mu, s1, tau_b);
        const Eigen::ArrayXXd wt_a = w.components - theta_a.components;
        const Eigen::ArrayXXd wt_b = w.components - theta_b.components;
        row.theta_inf = theta_a.max_magnitude();
        row.identity_error = (wt_a + theta_a.components - w.components).abs().maxCoeff();
        row.h1_w_tilde = h1_norm_corrected(w, theta_a, g0a, s1 * row.mass_mu);

        rep.identity_max = std::max(rep.identity_max, row.identity_error);
        rep.invariance_error = std::max(
            rep.invariance_error, ((wt_a + theta_a.components) - (wt_b + theta_b.components)).abs().maxCoeff());
        rep.w_tilde_difference = std::max(rep.w_tilde_difference, (wt_a - wt_b).abs().maxCoeff());
        rep.rows.push_back(row);
        nus.push_back(run.nu);
        if (row.theta_inf > 0.0) pairs.emplace_back(std::log(run.nu), std::log(row.theta_inf));
    }
    if (pairs.size() >= 2 && distinct_nu(nus)) {
        rep.theta = fit_rate(pairs);
        rep.fitted = true;
    }
    return rep;
}

HolderReport holder_uniformity_study(const VVConfig& cfg) { return holder_uniformity_study(cfg, run_sweep(cfg)); }

HolderReport holder_uniformity_study(const VVConfig& cfg, const Sweep& sweep) {
    if (!(cfg.holder_beta > 0.0 && cfg.holder_beta < 1.0)) throw InvalidArgument("holder_beta must lie in (0, 1)");
    HolderReport rep;
    rep.beta = cfg.holder_beta;
    rep.inviscid = sweep.inviscid_holder_sup;
    double lo = kInfinity, hi = 0.0;
    for (const auto& run : sweep.viscous) {
        rep.rows.push_back({run.nu, run.holder_sup});
        lo = std::min(lo, run.holder_sup);
        hi = std::max(hi, run.holder_sup);
    }
    rep.ratio = (!rep.rows.empty() && lo > 0.0) ? hi / lo : 1.0;
    return rep;
}

void write_vv_report(std::ostream& out, const RateReport& report) {
    out << "nu,l2_err,linf_err,h1_w,mass_mu,theta_inf,holder\n";
    for (const auto& r : report.rows) {
        const double h1 = std::isnan(r.h1_w_tilde) ? r.h1_w : r.h1_w_tilde;
        out << format_sci(r.nu) << ',' << format_sci(r.l2_err) << ',' << format_sci(r.linf_err) << ','
            << format_sci(h1) << ',' << format_sci(r.mass_mu) << ',' << format_sci(r.theta_inf) << ','
            << format_sci(r.holder) << '\n';
    }
    if (report.fitted) {
        out << "# slope_l2=" << format_sci(report.l2.slope) << ", slope_linf=" << format_sci(report.linf.slope)
            << ", r2=" << format_sci(report.l2.r2) << '\n';
    } else {
        out << "# slope_l2=nan, slope_linf=nan, r2=nan (" << report.flag << ")\n";
    }
}

}  // namespace agg
