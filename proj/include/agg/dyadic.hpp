#pragma once

#include "agg/grid.hpp"

#include <vector>

namespace agg {

/// Radial partition of unity in |ξ|.
///
/// ψ(s) = 1 for s <= 3/5 and 0 for s >= 5/6, smooth in between. The low block
/// uses χ̂(ξ) = ψ(|ξ|), supported in |ξ| <= 5/6; block j >= 0 uses
/// φ̂(2^-j ξ) with φ̂(ξ) = ψ(|ξ|/2) - ψ(|ξ|), supported in 3/5 <= |ξ| <= 5/3.
/// ξ is the physical wavenumber 2πk/L.
double lp_low_symbol(double xi_norm);
double lp_band_symbol(int j, double xi_norm);

struct DyadicBlock {
    int j = -1;
    ScalarField field;
};

struct DyadicDecomposition {
    std::vector<DyadicBlock> blocks;  ///< j = -1, 0, ..., j_max in order
    int j_max = -1;

    /// Σ blocks.
    ScalarField reconstruct() const;
};

/// Δ_j f for j = -1 .. j_max, where j_max is the largest band whose lower edge
/// (3/5) 2^j lies inside the grid's wavenumber set. The symbols are divided by
/// their sum on every discrete wavenumber, so Σ_j Δ_j f = f up to rounding.
DyadicDecomposition dyadic_blocks(const ScalarField& f);

/// sup_j 2^{jβ} ||Δ_j f||_inf (the low block weighted by 2^{-β}).
double holder_star_norm(const ScalarField& f, double beta);
double holder_star_norm(const DyadicDecomposition& dec, double beta);

struct BernsteinWindow {
    double lower = 0.0;
    double upper = 0.0;
};

/// Frozen ratio windows for k = 1, 2: the range seen by tests/calibrate on
/// analytic modes and random band-limited fields in 2D and 3D, widened 1.5x.
BernsteinWindow bernstein_window(int k);

struct BernsteinRow {
    int j = -1;
    double block_sup = 0.0;
    double derivative_sup = 0.0;  ///< sup_{|α|=k} ||∂^α Δ_j f||_inf
    double ratio = 0.0;           ///< derivative_sup / (2^{jk} block_sup)
    bool checked = false;         ///< false for numerically empty blocks
    bool lower_applies = false;   ///< band j >= 0 lying entirely below the Nyquist wavenumber
    bool within = true;
};

struct BernsteinReport {
    int k = 1;
    BernsteinWindow window;
    std::vector<BernsteinRow> rows;
    bool all_within = true;
};

/// Per-block Bernstein ratios. Every block is checked against the upper
/// bound; the lower bound applies to bands j >= 0 whose outer edge (5/3) 2^j
/// is below the Nyquist wavenumber π n / L. The low block's spectrum is a
/// ball and the top bands contain Nyquist modes, whose derivative symbol is zero.
BernsteinReport bernstein_check(const DyadicDecomposition& dec, int k);
BernsteinReport bernstein_check(const DyadicDecomposition& dec, int k, BernsteinWindow window);

}  // namespace agg
