#pragma once

#include "agg/grid.hpp"

#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace agg {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (h^d Σ |f|^p)^{1/p}, or max |f| for p = kInfinity.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& v, double p);  ///< norm of the pointwise magnitude

/// h^d Σ f.
double total_mass(const ScalarField& f);

struct H1Report {
    double h1 = 0.0;         ///< (||w||^2 + ||∇w||^2)^{1/2}
    double l2 = 0.0;         ///< ||w||
    double grad_l2 = 0.0;    ///< ||∇w||, ∇w computed spectrally
    double residual = 0.0;   ///< | ||∇w|| - |σ1| ||μ - mean μ|| |
};

/// H^1 norm of a velocity difference w together with the torus identity
/// ||∇w|| = |σ1| ||μ - mean μ||, which holds when w = solve_velocity(μ, σ1).
H1Report h1_norm_diff(const VectorField& w, const ScalarField& mu, double sigma1);

/// ||b_R f||_{L2} with b_R(x) = 1 - a(|x - c| / R) about the box center.
/// Requires 0 < R < L/4.
double tail_norm(const ScalarField& f, double R);

/// Time series behind the total-mass identity m(t) = m(0) + (σ1+σ2) ∫ ||ρ||^2.
struct MassLedger {
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<double> l2sq;
    std::vector<double> integral;  ///< trapezoid ∫_0^t ||ρ||^2

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }

    /// m(t_k) - m(t_0) - (σ1+σ2) ∫_0^{t_k} ||ρ||^2 for every record.
    std::vector<double> residuals(double sigma_sum) const;
};

/// Appends a record at f.time; throws NonMonotoneTime unless f.time exceeds the last time.
void mass_ledger_append(MassLedger& ledger, const ScalarField& f);
MassLedger mass_ledger_update(MassLedger ledger, const ScalarField& f);

struct MassDiffReport {
    std::vector<double> times;
    std::vector<double> mass_mu;     ///< m(μ(t)) = m(ρ^ν) - m(ρ^0)
    std::vector<double> identity;    ///< (σ1+σ2) ∫ <μ, ρ^0 + ρ^ν> = (σ1+σ2) ∫ (||ρ^ν||^2 - ||ρ^0||^2)
    std::vector<double> residual;    ///< mass_mu - identity
    std::vector<double> bound;       ///< |σ1+σ2| ∫ (||ρ^0|| + ||ρ^ν||) ||μ||, when ||μ|| is supplied
    double max_residual = 0.0;
    bool bound_holds = true;
};

/// Checks m(μ) = (σ1+σ2) ∫ <μ, ρ^0 + ρ^ν> on aligned ledgers, and the
/// inequality |m(μ)| <= |σ1+σ2| ∫ (||ρ^0|| + ||ρ^ν||) ||μ|| + slack when
/// ||μ(t_k)|| is provided for every record.
MassDiffReport mass_diff_check(const MassLedger& ledger_nu, const MassLedger& ledger_0, double sigma1,
                               double sigma2, std::span<const double> mu_l2 = {}, double slack = 1e-3);

/// One observer tick of the diagnostics CSV.
struct DiagnosticsRow {
    double t = 0.0;
    double mass = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    double h1_w = std::numeric_limits<double>::quiet_NaN();
    double holder_beta = std::numeric_limits<double>::quiet_NaN();
    double tail_r1 = std::numeric_limits<double>::quiet_NaN();
    double tail_r2 = std::numeric_limits<double>::quiet_NaN();
    double ledger_residual = std::numeric_limits<double>::quiet_NaN();
};

void write_diagnostics_header(std::ostream& out);
void write_diagnostics_row(std::ostream& out, const DiagnosticsRow& row);

/// "%.12e" formatting used by every CSV writer.
std::string format_sci(double value);

}  // namespace agg
