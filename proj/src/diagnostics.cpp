#include "agg/diagnostics.hpp"

#include "agg/error.hpp"
#include "agg/fft.hpp"
#include "agg/smooth.hpp"
#include "agg/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace agg {

double lp_norm(const ScalarField& f, double p) {
    if (f.values.size() == 0) return 0.0;
    if (std::isinf(p)) return f.values.abs().maxCoeff();
    if (!(p >= 1.0)) throw InvalidArgument("lp_norm requires p >= 1");
    const double h_d = f.grid.cell_volume();
    if (p == 1.0) return f.values.abs().sum() * h_d;
    if (p == 2.0) return std::sqrt(f.values.square().sum() * h_d);
    return std::pow(f.values.abs().pow(p).sum() * h_d, 1.0 / p);
}

double lp_norm(const VectorField& v, double p) {
    return lp_norm(ScalarField(v.grid, v.magnitude(), v.time), p);
}

double total_mass(const ScalarField& f) { return f.values.sum() * f.grid.cell_volume(); }

H1Report h1_norm_diff(const VectorField& w, const ScalarField& mu, double sigma1) {
    if (w.grid != mu.grid) throw MisalignedGrids("w and mu live on different grids");
    const auto sym = spectral_symbols(w.grid);
    const double h_d = w.grid.cell_volume();
    const auto n_total = static_cast<double>(w.grid.size());
    const std::complex<double> i(0.0, 1.0);

    H1Report r;
    r.l2 = std::sqrt(w.components.square().sum() * h_d);

    // Parseval: h^d Σ |g|^2 = h^d / N Σ |ĝ|^2
    double grad_sq = 0.0;
    Eigen::ArrayXcd buf(w.grid.size());
    for (int j = 0; j < w.dimension(); ++j) {
        buf = w.component(j).cast<std::complex<double>>();
        fft_forward(w.grid, buf);
        for (int a = 0; a < w.dimension(); ++a) {
            grad_sq += (sym->xi.col(a) * buf.abs()).square().sum();
        }
    }
    r.grad_l2 = std::sqrt(grad_sq * h_d / n_total);
    r.h1 = std::sqrt(r.l2 * r.l2 + r.grad_l2 * r.grad_l2);

    // ||μ - mean μ|| over the modes the Poisson symbol can see
    buf = mu.values.cast<std::complex<double>>();
    fft_forward(mu.grid, buf);
    const double mu_sq = (sym->xi_squared > 0.0).select(buf.abs2(), 0.0).sum() * h_d / n_total;
    r.residual = std::abs(r.grad_l2 - std::abs(sigma1) * std::sqrt(mu_sq));
    return r;
}

double tail_norm(const ScalarField& f, double R) {
    const Grid& g = f.grid;
    if (!(R > 0.0) || !(R < 0.25 * g.box_length())) {
        throw InvalidArgument("tail_norm requires 0 < R < L/4");
    }
    const double h = g.spacing();
    const double c = g.center();
    double acc = 0.0;
    for (Eigen::Index p = 0; p < g.size(); ++p) {
        const auto idx = g.unravel(p);
        double r2 = 0.0;
        for (int a = 0; a < g.dimension(); ++a) {
            const double x = idx[a] * h - c;
            r2 += x * x;
        }
        const double b = 1.0 - plateau(std::sqrt(r2) / R);
        if (b == 0.0) continue;
        const double v = b * f.values(p);
        acc += v * v;
    }
    return std::sqrt(acc * g.cell_volume());
}

std::vector<double> MassLedger::residuals(double sigma_sum) const {
    std::vector<double> out(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        out[k] = mass[k] - mass.front() - sigma_sum * integral[k];
    }
    return out;
}

void mass_ledger_append(MassLedger& ledger, const ScalarField& f) {
    if (!ledger.empty() && !(f.time > ledger.times.back())) {
        throw NonMonotoneTime("ledger record at t=" + std::to_string(f.time) +
                              " does not follow t=" + std::to_string(ledger.times.back()));
    }
    const double h_d = f.grid.cell_volume();
    const double m = f.values.sum() * h_d;
    const double sq = f.values.square().sum() * h_d;
    double cumulative = 0.0;
    if (!ledger.empty()) {
        const double dt = f.time - ledger.times.back();
        cumulative = ledger.integral.back() + 0.5 * dt * (ledger.l2sq.back() + sq);
    }
    ledger.times.push_back(f.time);
    ledger.mass.push_back(m);
    ledger.l2sq.push_back(sq);
    ledger.integral.push_back(cumulative);
}

MassLedger mass_ledger_update(MassLedger ledger, const ScalarField& f) {
    mass_ledger_append(ledger, f);
    return ledger;
}

MassDiffReport mass_diff_check(const MassLedger& ledger_nu, const MassLedger& ledger_0, double sigma1,
                               double sigma2, std::span<const double> mu_l2, double slack) {
    if (ledger_nu.size() != ledger_0.size()) throw MisalignedGrids("ledgers have different lengths");
    if (!mu_l2.empty() && mu_l2.size() != ledger_nu.size()) {
        throw MisalignedGrids("||mu|| series does not match ledger length");
    }
    const std::size_t n = ledger_nu.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double t = ledger_nu.times[k];
        if (std::abs(t - ledger_0.times[k]) > 1e-12 * std::max(1.0, std::abs(t))) {
            throw MisalignedGrids("ledger times differ at record " + std::to_string(k));
        }
    }
    const double s = sigma1 + sigma2;
    MassDiffReport r;
    r.times = ledger_nu.times;
    r.mass_mu.resize(n);
    r.identity.resize(n);
    r.residual.resize(n);
    double cross = 0.0;
    double bound = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        // <μ, ρ^0 + ρ^ν> = ||ρ^ν||^2 - ||ρ^0||^2
        const double integrand = ledger_nu.l2sq[k] - ledger_0.l2sq[k];
        if (k > 0) {
            const double dt = r.times[k] - r.times[k - 1];
            const double prev = ledger_nu.l2sq[k - 1] - ledger_0.l2sq[k - 1];
            cross += 0.5 * dt * (prev + integrand);
        }
        r.mass_mu[k] = ledger_nu.mass[k] - ledger_0.mass[k];
        r.identity[k] = s * cross;
        r.residual[k] = r.mass_mu[k] - r.identity[k];
        r.max_residual = std::max(r.max_residual, std::abs(r.residual[k]));
        if (!mu_l2.empty()) {
            const double weight = std::sqrt(ledger_0.l2sq[k]) + std::sqrt(ledger_nu.l2sq[k]);
            const double term = weight * mu_l2[k];
            if (k > 0) {
                const double dt = r.times[k] - r.times[k - 1];
                const double prev = (std::sqrt(ledger_0.l2sq[k - 1]) + std::sqrt(ledger_nu.l2sq[k - 1])) *
                                    mu_l2[k - 1];
                bound += 0.5 * dt * (prev + term);
            }
            r.bound.push_back(std::abs(s) * bound);
            if (std::abs(r.mass_mu[k]) > std::abs(s) * bound + slack) r.bound_holds = false;
        }
    }
    return r;
}

std::string format_sci(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", value);
    return buf;
}

void write_diagnostics_header(std::ostream& out) {
    out << "t,mass,l2,linf,h1_w,holder_beta,tail_R1,tail_R2,ledger_residual\n";
}

void write_diagnostics_row(std::ostream& out, const DiagnosticsRow& row) {
    out << format_sci(row.t) << ',' << format_sci(row.mass) << ',' << format_sci(row.l2) << ','
        << format_sci(row.linf) << ',' << format_sci(row.h1_w) << ',' << format_sci(row.holder_beta) << ','
        << format_sci(row.tail_r1) << ',' << format_sci(row.tail_r2) << ','
        << format_sci(row.ledger_residual) << '\n';
}

}  // namespace agg
