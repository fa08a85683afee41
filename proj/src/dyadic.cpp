#include "agg/dyadic.hpp"

#include "agg/error.hpp"
#include "agg/fft.hpp"
#include "agg/smooth.hpp"
#include "agg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace agg {
namespace {

constexpr double kInner = 3.0 / 5.0;
constexpr double kOuter = 5.0 / 6.0;

double psi(double s) { return 1.0 - smooth_step((s - kInner) / (kOuter - kInner)); }

double sup_abs(const Eigen::ArrayXd& a) { return a.size() ? a.abs().maxCoeff() : 0.0; }

}  // namespace

double lp_low_symbol(double xi_norm) { return psi(xi_norm); }

double lp_band_symbol(int j, double xi_norm) {
    const double s = std::ldexp(xi_norm, -j);
    return psi(0.5 * s) - psi(s);
}

ScalarField DyadicDecomposition::reconstruct() const {
    if (blocks.empty()) throw InvalidArgument("empty decomposition");
    ScalarField sum = blocks.front().field;
    for (std::size_t b = 1; b < blocks.size(); ++b) sum.values += blocks[b].field.values;
    return sum;
}

DyadicDecomposition dyadic_blocks(const ScalarField& f) {
    const auto sym = spectral_symbols(f.grid);
    const double xi_max = sym->xi_norm.maxCoeff();
    int j_max = 0;
    while (kInner * std::ldexp(1.0, j_max + 1) <= xi_max) ++j_max;

    const Eigen::Index size = f.grid.size();
    const int count = j_max + 2;
    Eigen::ArrayXXd symbols(size, count);
    for (Eigen::Index p = 0; p < size; ++p) {
        const double r = sym->xi_norm(p);
        symbols(p, 0) = lp_low_symbol(r);
        for (int j = 0; j <= j_max; ++j) symbols(p, j + 1) = lp_band_symbol(j, r);
    }
    const Eigen::ArrayXd total = symbols.rowwise().sum();
    for (int c = 0; c < count; ++c) symbols.col(c) /= total;

    Eigen::ArrayXcd f_hat = f.values.cast<std::complex<double>>();
    fft_forward(f.grid, f_hat);

    DyadicDecomposition dec;
    dec.j_max = j_max;
    dec.blocks.reserve(count);
    Eigen::ArrayXcd buf(size);
    for (int c = 0; c < count; ++c) {
        buf = f_hat * symbols.col(c);
        fft_inverse(f.grid, buf);
        dec.blocks.push_back({c - 1, ScalarField(f.grid, buf.real(), f.time)});
    }
    return dec;
}

double holder_star_norm(const DyadicDecomposition& dec, double beta) {
    if (!(beta > 0.0)) throw InvalidArgument("holder_star_norm requires beta > 0");
    double best = 0.0;
    for (const auto& b : dec.blocks) {
        best = std::max(best, std::pow(2.0, b.j * beta) * sup_abs(b.field.values));
    }
    return best;
}

double holder_star_norm(const ScalarField& f, double beta) {
    if (!(beta > 0.0)) throw InvalidArgument("holder_star_norm requires beta > 0");
    return holder_star_norm(dyadic_blocks(f), beta);
}

BernsteinWindow bernstein_window(int k) {
    // tests/calibrate: k=1 in [0.375, 1.625], k=2 in [0.1406, 2.6406]
    if (k == 1) return {0.375 / 1.5, 1.625 * 1.5};
    if (k == 2) return {0.1406 / 1.5, 2.6406 * 1.5};
    throw InvalidArgument("bernstein_check supports k in {1, 2}");
}

BernsteinReport bernstein_check(const DyadicDecomposition& dec, int k) {
    return bernstein_check(dec, k, bernstein_window(k));
}

BernsteinReport bernstein_check(const DyadicDecomposition& dec, int k, BernsteinWindow window) {
    if (k != 1 && k != 2) throw InvalidArgument("bernstein_check supports k in {1, 2}");
    BernsteinReport rep;
    rep.k = k;
    rep.window = window;
    if (dec.blocks.empty()) return rep;

    const Grid& grid = dec.blocks.front().field.grid;
    const auto sym = spectral_symbols(grid);
    const int d = grid.dimension();
    // derivative symbols vanish on Nyquist modes, so only bands below the
    // Nyquist wavenumber carry the lower Bernstein bound
    const double xi_nyquist = std::numbers::pi * grid.points_per_axis() / grid.box_length();
    double overall = 0.0;
    for (const auto& b : dec.blocks) overall = std::max(overall, sup_abs(b.field.values));

    Eigen::ArrayXcd hat(grid.size());
    Eigen::ArrayXcd buf(grid.size());
    for (const auto& b : dec.blocks) {
        BernsteinRow row;
        row.j = b.j;
        row.block_sup = sup_abs(b.field.values);
        hat = b.field.values.cast<std::complex<double>>();
        fft_forward(grid, hat);
        double deriv = 0.0;
        for (int a = 0; a < d; ++a) {
            for (int c = (k == 1 ? a : a); c < (k == 1 ? a + 1 : d); ++c) {
                // k = 1: iξ_a; k = 2: -ξ_a ξ_c
                if (k == 1) {
                    buf = std::complex<double>(0.0, 1.0) * sym->xi.col(a).cast<std::complex<double>>() * hat;
                } else {
                    buf = -(sym->xi.col(a) * sym->xi.col(c)).cast<std::complex<double>>() * hat;
                }
                fft_inverse(grid, buf);
                deriv = std::max(deriv, sup_abs(buf.real()));
            }
        }
        row.derivative_sup = deriv;
        row.checked = row.block_sup > 1e-10 * overall && row.block_sup > 0.0;
        if (row.checked) {
            const double scale = std::pow(2.0, b.j * k);
            row.ratio = deriv / (scale * row.block_sup);
            row.lower_applies = b.j >= 0 && kOuter * std::ldexp(2.0, b.j) < xi_nyquist;
            const bool above = !row.lower_applies || row.ratio >= window.lower;
            row.within = above && row.ratio <= window.upper;
            rep.all_within = rep.all_within && row.within;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace agg
