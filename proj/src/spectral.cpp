#include "agg/spectral.hpp"

#include "agg/error.hpp"
#include "agg/fft.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace agg {
namespace {

std::shared_ptr<const SpectralSymbols> build_symbols(const Grid& grid) {
    const Eigen::Index size = grid.size();
    const int d = grid.dimension();
    const int n = grid.points_per_axis();
    auto sym = std::make_shared<SpectralSymbols>();
    sym->xi.resize(size, d);
    sym->xi_squared.resize(size);
    sym->xi_norm.resize(size);
    sym->retained.resize(size);
    for (Eigen::Index p = 0; p < size; ++p) {
        const auto idx = grid.unravel(p);
        double sq = 0.0;
        double full = 0.0;
        bool keep = true;
        for (int a = 0; a < d; ++a) {
            const int k = grid.wavenumber(idx[a]);
            const double xi = grid.physical_wavenumber(k);
            full += xi * xi;
            const double derivative = (2 * k == -n) ? 0.0 : xi;
            sym->xi(p, a) = derivative;
            sq += derivative * derivative;
            if (3 * std::abs(k) > n) keep = false;
        }
        sym->xi_squared(p) = sq;
        sym->xi_norm(p) = std::sqrt(full);
        sym->retained(p) = keep;
    }
    return sym;
}

}  // namespace

std::shared_ptr<const SpectralSymbols> spectral_symbols(const Grid& grid) {
    static std::mutex mutex;
    static std::map<std::tuple<int, int, double>, std::shared_ptr<const SpectralSymbols>> cache;
    const auto key = std::make_tuple(grid.dimension(), grid.points_per_axis(), grid.box_length());
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[key];
    if (!slot) slot = build_symbols(grid);
    return slot;
}

SpectralField forward_transform(const ScalarField& f) {
    if (f.values.size() != f.grid.size()) throw InvalidArgument("field size does not match grid");
    SpectralField s(f.grid);
    s.coefficients = f.values.cast<std::complex<double>>();
    fft_forward(f.grid, s.coefficients);
    return s;
}

ScalarField inverse_transform(const SpectralField& s, double time) {
    Eigen::ArrayXcd buf = s.coefficients;
    fft_inverse(s.grid, buf);
    ScalarField f(s.grid, time);
    f.values = buf.real();
    return f;
}

VectorField spectral_gradient(const SpectralField& s, double time) {
    const auto sym = spectral_symbols(s.grid);
    VectorField g(s.grid, time);
    const std::complex<double> i(0.0, 1.0);
    Eigen::ArrayXcd buf(s.grid.size());
    for (int a = 0; a < s.grid.dimension(); ++a) {
        buf = i * sym->xi.col(a).cast<std::complex<double>>() * s.coefficients;
        fft_inverse(s.grid, buf);
        g.component(a) = buf.real();
    }
    return g;
}

VectorField spectral_gradient(const ScalarField& f) {
    return spectral_gradient(forward_transform(f), f.time);
}

ScalarField spectral_laplacian(const ScalarField& f) {
    const auto sym = spectral_symbols(f.grid);
    SpectralField s = forward_transform(f);
    s.coefficients *= -sym->xi_squared;
    return inverse_transform(s, f.time);
}

ScalarField spectral_divergence(const VectorField& v) {
    const auto sym = spectral_symbols(v.grid);
    const std::complex<double> i(0.0, 1.0);
    Eigen::ArrayXcd total = Eigen::ArrayXcd::Zero(v.grid.size());
    Eigen::ArrayXcd buf(v.grid.size());
    for (int a = 0; a < v.grid.dimension(); ++a) {
        buf = v.component(a).cast<std::complex<double>>();
        fft_forward(v.grid, buf);
        total += i * sym->xi.col(a).cast<std::complex<double>>() * buf;
    }
    return inverse_transform(SpectralField(v.grid, std::move(total)), v.time);
}

void dealias_in_place(SpectralField& s) {
    const auto sym = spectral_symbols(s.grid);
    s.coefficients = sym->retained.select(s.coefficients, std::complex<double>(0.0, 0.0));
}

SpectralField dealias(const SpectralField& s) {
    SpectralField out = s;
    dealias_in_place(out);
    return out;
}

double inner_product(const ScalarField& f, const ScalarField& g) {
    if (f.grid != g.grid) throw MisalignedGrids("inner product of fields on different grids");
    return (f.values * g.values).sum() * f.grid.cell_volume();
}

}  // namespace agg
