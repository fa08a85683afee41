// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "agg/diagnostics.hpp"
#include "agg/dyadic.hpp"
#include "agg/harness.hpp"
#include "agg/initial.hpp"
#include "agg/inviscid.hpp"
#include "agg/oracles.hpp"
#include "agg/spectral.hpp"
#include "agg/velocity.hpp"
#include "agg/viscous.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace agg;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("criterion %2d %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

SimParams params(double s1, double s2, double nu, double t_end, double dt = 0.01) {
    SimParams p;
    p.sigma1 = s1;
    p.sigma2 = s2;
    p.nu = nu;
    p.t_end = t_end;
    p.dt = dt;
    return p;
}

double radius_of(const Grid& g, Eigen::Index p, const Eigen::MatrixXd& x) {
    const double c = g.box_length() / 2;
    double r2 = 0.0;
    for (int a = 0; a < g.dimension(); ++a) r2 += (x(a, p) - c) * (x(a, p) - c);
    return std::sqrt(r2);
}

// every trajectory produced below, for the amplitude-bound criterion
struct Recorded {
    std::string name;
    bool holds = true;
    double worst = 0.0;  // max over records of (linf - envelope) / rho0_sup
};
std::vector<Recorded> recorded;

void record(const std::string& name, const Trajectory& t, double sigma2) {
    Recorded r{name, t.amplitude_bound_holds(sigma2, 1e-3), -1e300};
    for (std::size_t k = 0; k < t.linf.size(); ++k) {
        const double env = amplitude_envelope(t.rho0_sup, sigma2, t.ledger.times[k]);
        r.worst = std::max(r.worst, (t.linf[k] - env) / t.rho0_sup);
    }
    recorded.push_back(r);
}

void c1() {
    double worst = 0.0;
    for (int d : {2, 3}) {
        const Grid g(d, 16, 2.0 * std::numbers::pi);
        ScalarField rho = test::random_field(g, 100 + d);
        rho.values -= rho.values.mean();
        for (double s1 : {-1.0, 2.5}) {
            const VectorField a = solve_velocity(rho, s1);
            const VectorField b = direct_convolution_velocity(rho, s1);
            const double err = (a.components - b.components).abs().maxCoeff() / b.components.abs().maxCoeff();
            worst = std::max(worst, err);
        }
    }
    report(1, worst <= 1e-8, fmt("velocity vs direct summation, 16^2 and 16^3: rel Linf %.3e (<= 1e-8)", worst));
}

void c2() {
    const Grid g(2, 256, 4.0);
    const double c = 1.0, R0 = 0.5, T = 0.5;
    const ScalarField rho0 = sample_radial(g, patch_profile(c, R0, 2 * g.spacing()));
    const SimParams p = params(-1.0, 1.0, 0.0, T);
    const Trajectory t = run_inviscid(rho0, p);
    record("patch inviscid", t, p.sigma2);
    const PatchState ref = patch_reference(c, R0, -1.0, 1.0, 2, T);
    const Eigen::MatrixXd x = g.node_coordinates();
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index q = 0; q < g.size(); ++q) {
        if (radius_of(g, q, x) < 0.5 * ref.radius) {
            sum += t.final_state.values(q);
            ++count;
        }
    }
    const double plateau = sum / count;
    const double area = (t.final_state.values > 1.0).cast<double>().sum() * g.cell_volume();
    const double area_ref = std::numbers::pi * 0.25 * 0.5;
    const double e_plateau = std::abs(plateau - 2.0) / 2.0;
    const double e_area = std::abs(area - area_ref) / area_ref;
    report(2, e_plateau <= 0.02 && e_area <= 0.03,
           fmt("patch: plateau %.5f (oracle %.5f, err %.2f%% <= 2%%), area{rho>1} %.5f vs %.5f (err %.2f%% <= 3%%)",
               plateau, ref.density, 100 * e_plateau, area, area_ref, 100 * e_area));
}

void c3() {
    const Grid g(2, 256, 8.0);
    const RadialProfile prof = gaussian_profile(1.0, 0.25, 1.0);
    const ScalarField rho0 = sample_radial(g, prof);
    const double T = 0.5 / rho0.values.maxCoeff();
    const SimParams p = params(-1.0, 1.0, 0.0, T);
    const Trajectory t = run_inviscid(rho0, p);
    record("radial inviscid", t, p.sigma2);
    const ScalarField ref = sample_radial(g, radial_reference(prof, p, T, 512));

    // radial averages in bins of width h on both fields
    const Eigen::MatrixXd x = g.node_coordinates();
    const int nb = g.points_per_axis() / 2;
    std::vector<double> a(nb, 0.0), b(nb, 0.0), n(nb, 0.0);
    for (Eigen::Index q = 0; q < g.size(); ++q) {
        const int k = static_cast<int>(radius_of(g, q, x) / g.spacing());
        if (k >= nb) continue;
        a[k] += t.final_state.values(q);
        b[k] += ref.values(q);
        n[k] += 1.0;
    }
    double e2 = 0.0;
    for (int k = 0; k < nb; ++k) {
        if (n[k] == 0.0) continue;
        const double diff = (a[k] - b[k]) / n[k];
        e2 += diff * diff * n[k] * g.cell_volume();
    }
    const double rel = std::sqrt(e2) / lp_norm(rho0, 2.0);
    report(3, rel <= 0.01, fmt("radial oracle, Gaussian w = 0.25, t = %.2f: binned L2 mismatch %.3e of ||rho0|| (<= 1e-2)",
                               T, rel));
}

void c4() {
    const Grid g(2, 256, 8.0);
    const ScalarField rho0 = sample_radial(g, gaussian_profile(1.0, 0.5, 2.0));
    const SimParams p = params(-1.0, 0.0, 1e-3, 1.0);
    const Trajectory t = run_viscous(rho0, p);
    record("mass sigma2 = 0", t, p.sigma2);
    const double m0 = t.ledger.mass.front();
    double res = 0.0;
    for (double r : t.ledger.residuals(-1.0)) res = std::max(res, std::abs(r) / m0);

    const SimParams q = params(-1.0, 1.0, 1e-3, 0.5);
    const Trajectory c = run_viscous(rho0, q);
    record("mass conservative", c, q.sigma2);
    double drift = 0.0;
    for (double m : c.ledger.mass) drift = std::max(drift, std::abs(m - m0) / m0);
    report(4, res <= 1e-3 && drift <= 1e-6,
           fmt("mass identity: sigma2 = 0 ledger residual %.3e (<= 1e-3), conservative drift %.3e (<= 1e-6)", res,
               drift));
}

VVConfig ag_sweep(double sigma2) {
    VVConfig c;
    c.base = params(-1.0, sigma2, 0.0, 0.5);
    c.grid = Grid(2, 256, 8.0);
    c.init.kind = "gaussian";
    c.init.width = 0.5;
    c.nu_list = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
    c.t_eval = 0.5;
    c.beta = 0.9;
    c.holder_beta = 0.5;
    c.observe_every = 5;
    return c;
}

void c6_c7_c9() {
    const VVConfig cfg = ag_sweep(1.0);
    const Sweep sw = run_sweep(cfg);
    record("AG sweep inviscid", sw.inviscid, 1.0);
    for (const auto& r : sw.viscous) record(fmt("AG sweep nu=%g", r.nu), r.trajectory, 1.0);
    const RateReport rep = vv_study(cfg, sw);
    const HolderReport hr = holder_uniformity_study(cfg, sw);

    std::string rows;
    for (const auto& r : rep.rows) rows += fmt(" [nu %.3g: l2 %.3e linf %.3e]", r.nu, r.l2_err, r.linf_err);
    std::printf("   sweep%s\n", rows.c_str());
    const bool ok6 = rep.fitted && rep.l2.slope >= 0.4 && rep.l2.slope <= 0.6 && rep.l2.r2 >= 0.98 && rep.h1.slope >= 0.4;
    report(6, ok6, fmt("L2 rate: slope %.4f (band [0.4, 0.6]), r2 %.5f (>= 0.98), H1 slope of w %.4f (>= 0.4)",
                       rep.l2.slope, rep.l2.r2, rep.h1.slope));
    report(7, rep.fitted && rep.linf.slope >= rep.linf_threshold,
           fmt("Linf rate: slope %.4f (>= %.4f)", rep.linf.slope, rep.linf_threshold));
    std::string h;
    for (const auto& r : hr.rows) h += fmt(" %.4f", r.holder_sup);
    report(9, hr.ratio <= 1.25, fmt("Hoelder C^0.5_* sup over t per nu:%s, max/min %.4f (<= 1.25)", h.c_str(), hr.ratio));
}

void c8() {
    const VVConfig cfg = ag_sweep(0.0);
    const Sweep sw = run_sweep(cfg);
    record("corrector sweep inviscid", sw.inviscid, 0.0);
    for (const auto& r : sw.viscous) record(fmt("corrector sweep nu=%g", r.nu), r.trajectory, 0.0);
    const CorrectorReport cr = corrector_study(cfg, sw);
    const bool ok = cr.fitted && cr.theta.slope >= 0.4 && cr.identity_max <= 1e-12 && cr.invariance_error <= 1e-10 &&
                    cr.w_tilde_difference > 0.0;
    report(8, ok,
           fmt("corrector: theta slope %.4f (>= 0.4), identity %.2e (<= 1e-12), g0 invariance %.2e (<= 1e-10), "
               "w~ differs by %.2e",
               cr.theta.slope, cr.identity_max, cr.invariance_error, cr.w_tilde_difference));
}

void c10() {
    double recon = 0.0, leak = 0.0, homog = 0.0;
    bool bern = true;
    for (int d : {2, 3}) {
        const Grid g(d, d == 2 ? 128 : 32, 2.0 * std::numbers::pi);
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const ScalarField f = test::random_field(g, seed * 10 + d);
            const DyadicDecomposition dec = dyadic_blocks(f);
            recon = std::max(recon, test::max_abs(dec.reconstruct().values - f.values) / test::max_abs(f.values));
            const double fmax = forward_transform(f).coefficients.abs().maxCoeff();
            for (const auto& b : dec.blocks) {
                const SpectralField s = forward_transform(b.field);
                const double lo = b.j < 0 ? 0.0 : 0.6 * std::ldexp(1.0, b.j);
                const double hi = b.j < 0 ? 5.0 / 6.0 : 5.0 / 3.0 * std::ldexp(1.0, b.j);
                for (Eigen::Index q = 0; q < g.size(); ++q) {
                    const auto k = g.unravel(q);
                    double xi2 = 0.0;
                    for (int a = 0; a < d; ++a) {
                        const double xi = 2 * std::numbers::pi * g.wavenumber(k[a]) / g.box_length();
                        xi2 += xi * xi;
                    }
                    const double xi = std::sqrt(xi2);
                    if (xi < lo - 1e-12 || xi > hi + 1e-12) leak = std::max(leak, std::abs(s.coefficients(q)) / fmax);
                }
            }
            for (double beta : {0.3, 0.5, 0.9}) {
                const double n1 = holder_star_norm(f, beta);
                for (double lam : {2.0, -0.37, 1e3}) {
                    const double n2 = holder_star_norm(ScalarField(g, lam * f.values), beta);
                    homog = std::max(homog, std::abs(n2 - std::abs(lam) * n1) / (std::abs(lam) * n1));
                }
            }
            const ScalarField smooth = test::smooth_random_field(g, seed + 40, d == 2 ? 6 : 3);
            for (int k : {1, 2}) bern = bern && bernstein_check(dyadic_blocks(smooth), k).all_within;
        }
        for (int m : {1, 3, 5, 11}) {
            for (int k : {1, 2}) bern = bern && bernstein_check(dyadic_blocks(test::plane_wave(g, {m, 0, 0}, 0.3)), k).all_within;
        }
    }
    report(10, recon <= 1e-10 && leak <= 1e-12 && bern && homog <= 1e-12,
           fmt("Littlewood-Paley: reconstruction %.2e (<= 1e-10), leakage %.2e (<= 1e-12), Bernstein %s, "
               "homogeneity %.2e (<= 1e-12)",
               recon, leak, bern ? "within windows" : "OUTSIDE windows", homog));
}

void c11() {
    // at 256^2 the truncated spectrum of the bump leaves a flat floor near 1e-4
    const Grid g(2, 512, 8.0);
    const double supp = 0.75, nu = 1e-3, T = 0.5;
    const ScalarField rho0 = sample_radial(g, bump_profile(supp, 2, 0.3));
    SimParams p = params(-1.0, 1.0, nu, T);
    double vmax = 0.0;
    const Observer obs{1, [&](const ScalarField& rho) {
                           vmax = std::max(vmax, lp_norm(advecting_velocity(rho, p), kInfinity));
                       }};
    const std::vector<Observer> observers{obs};
    const Trajectory t = run_viscous(rho0, p, observers);
    record("tail viscous", t, p.sigma2);
    const double R = supp + vmax * T + 6 * std::sqrt(nu * T) + 0.5;
    const double norm0 = lp_norm(rho0, 2.0);
    const double tail = tail_norm(t.final_state, R);
    bool monotone = true;
    double prev = kInfinity;
    for (double r = 0.1; r < g.box_length() / 4; r += 0.05) {
        const double v = tail_norm(t.final_state, r);
        monotone = monotone && v <= prev;
        prev = v;
    }
    report(11, tail <= 1e-6 * norm0 && monotone,
           fmt("tail: R = %.4f, tail %.3e of ||rho0|| (<= 1e-6), nonincreasing in R: %s", R, tail / norm0,
               monotone ? "yes" : "no"));
}

void c12() {
    const Grid g(2, 128, 8.0);
    const ScalarField rho0 = two_bumps(g, 1.0, 0.5, 2.0);
    const SimParams p = params(-1.0, 1.0, 5e-3, 0.25);
    const std::vector<Trajectory> it = picard_iterate(rho0, p, 0.25, 4);
    bool envelope = true;
    for (std::size_t n = 0; n < it.size(); ++n) {
        envelope = envelope && it[n].amplitude_bound_holds(p.sigma2, 1e-3);
        record(fmt("picard iterate %zu", n), it[n], p.sigma2);
    }
    const double d43 = sup_l2_distance(it[4], it[3]);
    const double d32 = sup_l2_distance(it[3], it[2]);
    report(12, d43 <= 0.3 * d32 && envelope,
           fmt("Picard: |r4 - r3| %.3e, |r3 - r2| %.3e, ratio %.4f (<= 0.3), envelope %s", d43, d32, d43 / d32,
               envelope ? "holds" : "VIOLATED"));
}

void c5() {
    bool ok = true;
    double worst = -1e300, worst_ok = -1e300;
    std::string bad;
    for (const auto& r : recorded) {
        ok = ok && r.holds;
        worst = std::max(worst, r.worst);
        if (r.holds) worst_ok = std::max(worst_ok, r.worst);
        if (!r.holds) bad += fmt(" [%s: %.3e]", r.name.c_str(), r.worst);
    }
    std::string detail = fmt("amplitude bound over %zu runs: max (linf - envelope)/||rho0|| = %.3e (<= 1e-3)",
                             recorded.size(), worst);
    if (!bad.empty()) detail += fmt(", violated by%s, other runs <= %.3e", bad.c_str(), worst_ok);
    report(5, ok, detail);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::function<void()>> steps{c1, c2, c3, c4, c6_c7_c9, c8, c10, c11, c12, c5};
    for (const auto& s : steps) {
        try {
            s();
        } catch (const std::exception& e) {
            std::printf("criterion run aborted: %s\n", e.what());
            ++failures;
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d failing, %.1f s\n", failures, secs);
    return failures == 0 ? 0 : 1;
}
