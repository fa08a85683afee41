#include "agg/velocity.hpp"

#include "agg/error.hpp"
#include "agg/fft.hpp"
#include "agg/interpolate.hpp"
#include "agg/smooth.hpp"
#include "agg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace agg {

void SimParams::validate() const {
    if (!(sigma1 != 0.0) || !std::isfinite(sigma1)) throw InvalidArgument("sigma1 must be nonzero");
    if (!std::isfinite(sigma2)) throw InvalidArgument("sigma2 must be finite");
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("nu must be >= 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be >= 0");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw InvalidArgument("cfl must lie in (0, 1]");
    if (!(blowup_guard > 0.0 && blowup_guard < 1.0)) throw InvalidArgument("blowup_guard must lie in (0, 1)");
    if (!(velocity_floor > 0.0)) throw InvalidArgument("velocity_floor must be > 0");
    if (snapshot_every < 0) throw InvalidArgument("snapshot_every must be >= 0");
}

double SimParams::guarded_horizon(double rho0_sup) const {
    if (sigma2 == 0.0 || rho0_sup == 0.0) return std::numeric_limits<double>::infinity();
    return (1.0 - blowup_guard) / (std::abs(sigma2) * rho0_sup);
}

double RadialProfile::operator()(double r) const {
    if (generator) return generator(r);
    if (radii.empty()) return 0.0;
    if (r <= radii.front()) return values.front();
    if (r > radii.back()) return 0.0;
    const auto it = std::upper_bound(radii.begin(), radii.end(), r);
    const auto hi = static_cast<std::size_t>(it - radii.begin());
    const std::size_t lo = hi - 1;
    if (hi >= radii.size()) return values.back();
    const double t = (r - radii[lo]) / (radii[hi] - radii[lo]);
    return (1.0 - t) * values[lo] + t * values[hi];
}

void RadialProfile::validate() const {
    if (radii.size() != values.size()) throw InvalidArgument("radial profile radii/values length mismatch");
    if (!radii.empty() && radii.front() < 0.0) throw InvalidArgument("radial profile radius below zero");
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (!(radii[i] > radii[i - 1])) throw InvalidArgument("radial profile radii must be strictly increasing");
    }
}

RadialProfile bump_profile(double r0, int dimension, double mass, int samples) {
    if (!(r0 > 0.0)) throw InvalidArgument("bump radius must be positive");
    if (dimension != 2 && dimension != 3) throw InvalidArgument("bump dimension must be 2 or 3");
    const double sphere = dimension == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
    const double moment = simpson(
        [&](double r) { return std::pow(r, dimension - 1) * bump_shape(r / r0); }, 0.0, r0, 4096, 1e-16);
    const double amplitude = mass / (sphere * moment);

    RadialProfile p;
    p.generator = [amplitude, r0](double r) { return amplitude * bump_shape(r / r0); };
    p.support_radius = r0;
    p.description = "bump r0=" + std::to_string(r0) + " mass=" + std::to_string(mass);
    samples = std::max(samples, 2);
    p.radii.resize(samples);
    p.values.resize(samples);
    for (int i = 0; i < samples; ++i) {
        p.radii[i] = r0 * i / (samples - 1);
        p.values[i] = p.generator(p.radii[i]);
    }
    return p;
}

VectorField solve_velocity(const ScalarField& rho, double sigma1) {
    const auto sym = spectral_symbols(rho.grid);
    Eigen::ArrayXcd rho_hat = rho.values.cast<std::complex<double>>();
    fft_forward(rho.grid, rho_hat);

    // -σ1 ρ̂ / |ξ|^2, zero where the symbol vanishes (k = 0 and pure Nyquist modes)
    const Eigen::ArrayXd inv = (sym->xi_squared > 0.0).select(-sigma1 / sym->xi_squared, 0.0);
    const Eigen::ArrayXcd potential = rho_hat * inv;

    VectorField v(rho.grid, rho.time);
    const std::complex<double> i(0.0, 1.0);
    Eigen::ArrayXcd buf(rho.grid.size());
    for (int a = 0; a < rho.grid.dimension(); ++a) {
        buf = i * sym->xi.col(a).cast<std::complex<double>>() * potential;
        fft_inverse(rho.grid, buf);
        v.component(a) = buf.real();
    }
    return v;
}

ScalarField potential_hessian(const ScalarField& rho, int i, int j) {
    const int d = rho.grid.dimension();
    if (i < 0 || j < 0 || i >= d || j >= d) throw InvalidArgument("hessian index out of range");
    const auto sym = spectral_symbols(rho.grid);
    Eigen::ArrayXcd hat = rho.values.cast<std::complex<double>>();
    fft_forward(rho.grid, hat);
    const Eigen::ArrayXd mult =
        (sym->xi_squared > 0.0).select(sym->xi.col(i) * sym->xi.col(j) / sym->xi_squared, 0.0);
    hat *= mult;
    fft_inverse(rho.grid, hat);
    return ScalarField(rho.grid, hat.real(), rho.time);
}

VectorField mean_field_velocity(const Grid& grid, double mass, double sigma1, double time) {
    VectorField v(grid, time);
    const double slope = sigma1 * mass / (grid.box_volume() * grid.dimension());
    if (slope == 0.0) return v;
    const double h = grid.spacing();
    const double c = grid.center();
    for (Eigen::Index p = 0; p < grid.size(); ++p) {
        const auto idx = grid.unravel(p);
        for (int a = 0; a < grid.dimension(); ++a) v.components(p, a) = slope * (idx[a] * h - c);
    }
    return v;
}

VectorField advecting_velocity(const ScalarField& rho, const SimParams& p) {
    VectorField v = solve_velocity(rho, p.sigma1);
    if (p.mean_field) {
        const double mass = rho.values.sum() * rho.grid.cell_volume();
        v.components += mean_field_velocity(rho.grid, mass, p.sigma1).components;
    }
    return v;
}

double tau0_radial_factor(const RadialProfile& g0, double r) {
    if (r <= 0.0) return 0.5 * g0(0.0);
    const double upper = g0.support_radius > 0.0 ? std::min(r, g0.support_radius) : r;
    const double moment = simpson([&](double eta) { return eta * g0(eta); }, 0.0, upper, 4096, 1e-14);
    return moment / (r * r);
}

VectorField corrector_tau0(const RadialProfile& g0, const Grid& grid) {
    if (grid.dimension() != 2) throw InvalidArgument("corrector tau0 is defined in 2D only");
    g0.validate();
    if (!(g0.support_radius > 0.0)) throw InvalidArgument("g0 must be compactly supported");
    if (2.0 * g0.support_radius > 0.25 * grid.box_length()) {
        throw InvalidArgument("g0 support exceeds a quarter of the box; tau0 would wrap");
    }
    const double mass = 2.0 * std::numbers::pi *
                        simpson([&](double eta) { return eta * g0(eta); }, 0.0, g0.support_radius, 4096, 1e-14);
    if (std::abs(mass - 1.0) > 1e-8) throw InvalidArgument("g0 must have unit mass");

    const double outer = mass / (2.0 * std::numbers::pi);
    VectorField tau(grid);
    const double h = grid.spacing();
    const double c = grid.center();
    for (Eigen::Index p = 0; p < grid.size(); ++p) {
        const auto idx = grid.unravel(p);
        const double x = idx[0] * h - c;
        const double y = idx[1] * h - c;
        const double r = std::hypot(x, y);
        const double f = r >= g0.support_radius ? outer / (r * r) : tau0_radial_factor(g0, r);
        tau.components(p, 0) = f * x;
        tau.components(p, 1) = f * y;
    }
    return tau;
}

VectorField corrector_theta(double mu_mass, double sigma1, const VectorField& tau0) {
    if (tau0.grid.dimension() != 2) throw InvalidArgument("corrector theta is defined in 2D only");
    VectorField theta = tau0;
    theta.components *= sigma1 * mu_mass;
    return theta;
}

double log_lipschitz_modulus(const VectorField& v, int n_pairs, std::uint64_t seed) {
    if (n_pairs < 1) throw InvalidArgument("n_pairs must be >= 1");
    const Grid& g = v.grid;
    const int d = g.dimension();
    const double h = g.spacing();
    // Interior region whose interpolation stencils never wrap.
    const double lo = h;
    const double hi = g.box_length() - 2.0 * h;
    if (hi - lo <= 1.0) throw InvalidArgument("box too small for unit-distance pairs");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::MatrixXd pts(d, 2 * static_cast<Eigen::Index>(n_pairs));
    Eigen::ArrayXd dist(n_pairs);
    for (int k = 0; k < n_pairs; ++k) {
        // rejection keeps both ends inside [lo, hi]^d
        for (;;) {
            Eigen::VectorXd x(d);
            Eigen::VectorXd dir(d);
            for (int a = 0; a < d; ++a) {
                x(a) = lo + (hi - lo) * unit(rng);
                dir(a) = gauss(rng);
            }
            const double r = 1.0 - unit(rng);  // (0, 1]
            const double norm = dir.norm();
            if (norm == 0.0) continue;
            const Eigen::VectorXd y = x + (r / norm) * dir;
            if ((y.array() < lo).any() || (y.array() > hi).any()) continue;
            pts.col(2 * k) = x;
            pts.col(2 * k + 1) = y;
            dist(k) = (y - x).norm();
            break;
        }
    }
    const Eigen::ArrayXXd vals = interpolate(v, pts);
    double best = 0.0;
    for (int k = 0; k < n_pairs; ++k) {
        const double r = dist(k);
        if (r <= 0.0) continue;
        const double dv = (vals.row(2 * k) - vals.row(2 * k + 1)).matrix().norm();
        best = std::max(best, dv / (r * (1.0 - std::log(r))));
    }
    return best;
}

}  // namespace agg
