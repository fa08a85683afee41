#pragma once

// Test-only reference computations. Nothing here calls the FFT wrapper.

#include "agg/grid.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace test {

inline agg::ScalarField random_field(const agg::Grid& g, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, scale);
    agg::ScalarField f(g);
    for (Eigen::Index p = 0; p < g.size(); ++p) f.values(p) = n(rng);
    return f;
}

/// Smooth random field: a few low Fourier modes with random amplitudes and phases.
inline agg::ScalarField smooth_random_field(const agg::Grid& g, std::uint64_t seed, int kmax = 3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Eigen::MatrixXd x = g.node_coordinates();
    agg::ScalarField f(g);
    f.values.setZero();
    const int d = g.dimension();
    for (int k0 = -kmax; k0 <= kmax; ++k0) {
        for (int k1 = -kmax; k1 <= kmax; ++k1) {
            for (int k2 = (d == 3 ? -kmax : 0); k2 <= (d == 3 ? kmax : 0); ++k2) {
                const double amp = u(rng);
                const double phase = std::numbers::pi * u(rng);
                const int k[3] = {k0, k1, k2};
                for (Eigen::Index p = 0; p < g.size(); ++p) {
                    double arg = phase;
                    for (int a = 0; a < d; ++a) arg += 2.0 * std::numbers::pi * k[a] * x(a, p) / g.box_length();
                    f.values(p) += amp * std::cos(arg);
                }
            }
        }
    }
    return f;
}

/// cos(2π k·x / L + phase).
inline agg::ScalarField plane_wave(const agg::Grid& g, const std::array<int, 3>& k, double phase = 0.0) {
    const Eigen::MatrixXd x = g.node_coordinates();
    agg::ScalarField f(g);
    for (Eigen::Index p = 0; p < g.size(); ++p) {
        double arg = phase;
        for (int a = 0; a < g.dimension(); ++a) arg += 2.0 * std::numbers::pi * k[a] * x(a, p) / g.box_length();
        f.values(p) = std::cos(arg);
    }
    return f;
}

/// Unnormalized DFT by direct summation, O(N^2).
inline Eigen::ArrayXcd direct_dft(const agg::Grid& g, const Eigen::ArrayXcd& data, int sign) {
    const Eigen::Index N = g.size();
    const int n = g.points_per_axis();
    const int d = g.dimension();
    Eigen::ArrayXcd out = Eigen::ArrayXcd::Zero(N);
    for (Eigen::Index q = 0; q < N; ++q) {
        const auto k = g.unravel(q);
        for (Eigen::Index p = 0; p < N; ++p) {
            const auto m = g.unravel(p);
            long dot = 0;
            for (int a = 0; a < d; ++a) dot += static_cast<long>(k[a]) * m[a];
            const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(dot % n) / n;
            out(q) += data(p) * std::polar(1.0, ang);
        }
    }
    return out;
}

inline double max_abs(const Eigen::ArrayXd& a) { return a.size() ? a.abs().maxCoeff() : 0.0; }

}  // namespace test
