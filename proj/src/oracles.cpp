#include "agg/oracles.hpp"

#include "agg/error.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace agg {
namespace {

/// Adaptive Simpson, kept local so the oracles do not reuse solver utilities.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth,
                        double fa, double fm, double fb, double whole) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, 0.5 * tol, depth - 1, fa, flm, fm, left) +
           adaptive_simpson(f, m, b, 0.5 * tol, depth - 1, fm, frm, fb, right);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return adaptive_simpson(f, a, b, tol, 40, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb));
}

/// Cumulative ∫_{s_0}^{s_i} f on uniform nodes, fourth order.
void cumulative_integral(const std::vector<double>& f, double ds, std::vector<double>& out) {
    const std::size_t m = f.size();
    out.assign(m, 0.0);
    if (m < 2) return;
    if (m == 2) {
        out[1] = 0.5 * ds * (f[0] + f[1]);
        return;
    }
    out[1] = ds / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    for (std::size_t i = 2; i < m; ++i) out[i] = out[i - 2] + ds / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
}

}  // namespace

VectorField direct_convolution_velocity(const ScalarField& rho, double sigma1) {
    const Grid& grid = rho.grid;
    const int n = grid.points_per_axis();
    const int d = grid.dimension();
    if (n > 32) throw GridTooLarge("direct convolution limited to n <= 32, got n = " + std::to_string(n));
    const double L = grid.box_length();
    const Eigen::Index N = grid.size();

    // per-axis trigonometric tables e^{2πi k m / n} and derivative symbols
    std::vector<std::complex<double>> phase(static_cast<std::size_t>(n) * n);
    for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n; ++k) {
            const double ang = 2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(k) * m) % n) / n;
            phase[static_cast<std::size_t>(m) * n + k] = std::polar(1.0, ang);
        }
    }
    std::vector<double> xi(n);
    for (int k = 0; k < n; ++k) {
        const int kk = k < n / 2 ? k : k - n;
        xi[k] = (kk == -n / 2) ? 0.0 : 2.0 * std::numbers::pi * kk / L;
    }

    auto digits = [&](Eigen::Index flat) {
        std::array<int, 3> idx{0, 0, 0};
        for (int a = d - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(flat % n);
            flat /= n;
        }
        return idx;
    };

    // multiplier per mode
    std::vector<std::array<std::complex<double>, 3>> symbol(N);
    for (Eigen::Index q = 0; q < N; ++q) {
        const auto k = digits(q);
        double k2 = 0.0;
        for (int a = 0; a < d; ++a) k2 += xi[k[a]] * xi[k[a]];
        for (int a = 0; a < d; ++a) {
            symbol[q][a] = k2 > 0.0 ? std::complex<double>(0.0, -sigma1 * xi[k[a]] / k2) : 0.0;
        }
    }

    // kernel at every offset z_m = m h
    const double inv_vol = 1.0 / std::pow(L, d);
    Eigen::ArrayXXd kernel = Eigen::ArrayXXd::Zero(N, d);
    for (Eigen::Index p = 0; p < N; ++p) {
        const auto m = digits(p);
        std::array<std::complex<double>, 3> acc{};
        for (Eigen::Index q = 0; q < N; ++q) {
            const auto k = digits(q);
            std::complex<double> e = 1.0;
            for (int a = 0; a < d; ++a) e *= phase[static_cast<std::size_t>(m[a]) * n + k[a]];
            for (int a = 0; a < d; ++a) acc[a] += symbol[q][a] * e;
        }
        for (int a = 0; a < d; ++a) kernel(p, a) = acc[a].real() * inv_vol;
    }

    const double hd = grid.cell_volume();
    VectorField v(grid, rho.time);
    v.components.setZero();
    for (Eigen::Index x = 0; x < N; ++x) {
        const auto ix = digits(x);
        for (Eigen::Index y = 0; y < N; ++y) {
            const double ry = rho.values(y);
            if (ry == 0.0) continue;
            const auto iy = digits(y);
            Eigen::Index off = 0;
            for (int a = 0; a < d; ++a) off = off * n + ((ix[a] - iy[a] + n) % n);
            for (int a = 0; a < d; ++a) v.components(x, a) += kernel(off, a) * ry;
        }
    }
    v.components *= hd;
    return v;
}

RadialProfile radial_reference(const RadialProfile& profile0, const SimParams& p, double t, int n_shells,
                               int dimension) {
    if (p.nu != 0.0) throw InvalidArgument("radial_reference requires nu = 0");
    if (dimension != 2 && dimension != 3) throw InvalidArgument("radial_reference supports d = 2 or 3");
    if (n_shells < 2) throw InvalidArgument("radial_reference needs at least 2 shells");
    if (!(profile0.support_radius > 0.0)) throw InvalidArgument("radial_reference needs compact support");
    if (!(t >= 0.0)) throw InvalidArgument("radial_reference needs t >= 0");

    const int d = dimension;
    const double s1 = p.sigma1;
    const double s2 = p.sigma2;
    const double S = profile0.support_radius;
    const std::size_t M = static_cast<std::size_t>(n_shells) + 1;
    const double ds = S / n_shells;

    std::vector<double> s(M), rho0(M), weight(M);
    double sup = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        s[i] = ds * static_cast<double>(i);
        rho0[i] = profile0(s[i]);
        weight[i] = std::pow(s[i], d - 1);
        sup = std::max(sup, s2 * rho0[i]);
    }
    if (s2 != 0.0 && !(1.0 - t * sup > 0.0)) throw DomainError("radial_reference: t beyond the blow-up time");

    auto carried = [&](std::size_t i, double tau) { return rho0[i] / (1.0 - s2 * tau * rho0[i]); };

    // state: r, Q, J in blocks of M
    std::vector<double> state(3 * M);
    {
        std::vector<double> f(M), q(M);
        for (std::size_t i = 0; i < M; ++i) f[i] = rho0[i] * weight[i];
        cumulative_integral(f, ds, q);
        for (std::size_t i = 0; i < M; ++i) {
            state[i] = s[i];
            state[M + i] = q[i];
            state[2 * M + i] = 1.0;
        }
    }

    std::vector<double> integrand(M), cum(M);
    auto rhs = [&](double tau, const std::vector<double>& y, std::vector<double>& dy) {
        dy.assign(3 * M, 0.0);
        for (std::size_t i = 0; i < M; ++i) {
            const double rh = carried(i, tau);
            integrand[i] = rh * rh * y[2 * M + i] * weight[i];
        }
        cumulative_integral(integrand, ds, cum);
        for (std::size_t i = 0; i < M; ++i) {
            const double r = y[i];
            dy[i] = (i == 0 || r <= 0.0) ? 0.0 : s1 * y[M + i] / std::pow(r, d - 1);
            dy[M + i] = (s1 + s2) * cum[i];
            dy[2 * M + i] = s1 * carried(i, tau) * y[2 * M + i];
        }
    };

    if (t > 0.0) {
        const double dt_ref = p.dt / 10.0;
        const long steps = std::max(1L, static_cast<long>(std::ceil(t / dt_ref - 1e-9)));
        const double h = t / static_cast<double>(steps);
        std::vector<double> k1, k2, k3, k4, tmp(3 * M);
        for (long k = 0; k < steps; ++k) {
            const double tau = h * static_cast<double>(k);
            rhs(tau, state, k1);
            for (std::size_t i = 0; i < 3 * M; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
            rhs(tau + 0.5 * h, tmp, k2);
            for (std::size_t i = 0; i < 3 * M; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
            rhs(tau + 0.5 * h, tmp, k3);
            for (std::size_t i = 0; i < 3 * M; ++i) tmp[i] = state[i] + h * k3[i];
            rhs(tau + h, tmp, k4);
            for (std::size_t i = 0; i < 3 * M; ++i) {
                state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
    }

    RadialProfile out;
    out.radii.resize(M);
    out.values.resize(M);
    for (std::size_t i = 0; i < M; ++i) {
        out.radii[i] = state[i];
        out.values[i] = carried(i, t);
    }
    out.support_radius = out.radii.back();
    out.description = "radial reference at t=" + std::to_string(t) + " from " + profile0.description;
    out.validate();
    return out;
}

PatchState patch_reference(double c, double R0, double sigma1, double sigma2, int d, double t) {
    if (d != 2 && d != 3) throw InvalidArgument("patch_reference supports d = 2 or 3");
    if (!(R0 > 0.0)) throw InvalidArgument("patch radius must be positive");
    const double denom = 1.0 - sigma2 * t * c;
    if (!(denom > 0.0)) throw DomainError("patch_reference: t beyond the blow-up time");
    PatchState out;
    out.density = c / denom;
    if (t == 0.0) {
        out.radius = R0;
        return out;
    }
    const double log_j =
        sigma1 * integrate([&](double s) { return c / (1.0 - sigma2 * s * c); }, 0.0, t, 1e-15 * (1.0 + c * t));
    out.radius = R0 * std::exp(log_j / d);
    return out;
}

}  // namespace agg
