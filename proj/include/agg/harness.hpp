#pragma once

#include "agg/config.hpp"
#include "agg/grid.hpp"
#include "agg/params.hpp"
#include "agg/trajectory.hpp"
#include "agg/velocity.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace agg {

struct VVConfig {
    SimParams base;                 ///< nu and t_end are overridden per run
    Grid grid{2, 256, 8.0};
    InitSpec init;
    std::vector<double> nu_list;    ///< positive, nonincreasing
    double t_eval = 0.5;
    double beta = 0.9;              ///< exponent of the L∞ rate 2β/(2β+d)
    double holder_beta = 0.5;       ///< exponent of the tracked C^β_* norm
    int observe_every = 5;          ///< Hölder observer cadence in steps
    bool pilot = false;             ///< 2x-resolution inviscid pilot for the ν floor
    unsigned threads = 0;           ///< concurrent viscous runs; 0 = hardware concurrency
    std::optional<RadialProfile> g0;      ///< corrector profile; default unit bump of radius L/16
    std::optional<RadialProfile> g0_alt;  ///< second profile for the invariance check; default radius L/24
    std::string output_dir;

    /// Throws InvalidArgument.
    void validate() const;
};

/// Builds a VVConfig from a parsed run configuration.
VVConfig vv_config_from(const RunConfig& cfg);

struct SweepRun {
    double nu = 0.0;
    Trajectory trajectory;
    double holder_sup = 0.0;  ///< sup over observer times of ||ρ^ν||_{C^holder_beta_*}
};

/// Shared solver output of a ν sweep: one inviscid run and one viscous run per ν.
struct Sweep {
    ScalarField rho0;
    Trajectory inviscid;
    double inviscid_holder_sup = 0.0;
    std::vector<SweepRun> viscous;  ///< in nu_list order
    std::optional<double> refinement_error;  ///< ||ρ^0_n - ρ^0_2n|| from the pilot
};

Sweep run_sweep(const VVConfig& cfg);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y = slope x + intercept. Throws DegenerateX when
/// fewer than two distinct x are given. r2 = 1 when y is constant.
RateFit fit_rate(std::span<const std::pair<double, double>> pairs);

struct RateRow {
    double nu = 0.0;
    double l2_err = 0.0;       ///< ||μ(t_eval)||_{L2},  μ = ρ^ν - ρ^0
    double linf_err = 0.0;
    double h1_w = 0.0;         ///< ||w||_{H1},  w = solve_velocity(μ)
    double h1_w_tilde = std::numeric_limits<double>::quiet_NaN();  ///< ||w - θ||_{H1} when the corrector applies
    double mass_mu = 0.0;
    double theta_inf = std::numeric_limits<double>::quiet_NaN();
    double holder = 0.0;
    double mass_identity_residual = std::numeric_limits<double>::quiet_NaN();
    bool excluded = false;     ///< below the ν floor, left out of the fits
};

struct RateReport {
    std::vector<RateRow> rows;   ///< nu_list order
    bool fitted = false;
    std::string flag;            ///< reason when not fitted
    RateFit l2;
    RateFit linf;
    RateFit h1;
    double linf_threshold = 0.0;  ///< 2β/(2β+d) - 0.1
    std::optional<double> refinement_error;
};

RateReport vv_study(const VVConfig& cfg);
RateReport vv_study(const VVConfig& cfg, const Sweep& sweep);

struct CorrectorRow {
    double nu = 0.0;
    double mass_mu = 0.0;
    double theta_inf = 0.0;
    double h1_w_tilde = 0.0;
    double identity_error = 0.0;  ///< max |w̃ + θ - w|
};

struct CorrectorReport {
    std::vector<CorrectorRow> rows;
    bool fitted = false;
    RateFit theta;
    double identity_max = 0.0;
    double invariance_error = 0.0;    ///< max |(w̃_a + θ_a) - (w̃_b + θ_b)| over two g0 choices
    double w_tilde_difference = 0.0;  ///< max |w̃_a - w̃_b|
};

/// Throws RequiresNonconservativeCase when σ1 + σ2 = 0, InvalidArgument unless d = 2.
CorrectorReport corrector_study(const VVConfig& cfg);
CorrectorReport corrector_study(const VVConfig& cfg, const Sweep& sweep);

struct HolderRow {
    double nu = 0.0;
    double holder_sup = 0.0;
};

struct HolderReport {
    double beta = 0.0;
    std::vector<HolderRow> rows;
    double inviscid = 0.0;
    double ratio = 1.0;  ///< max / min over the ν rows
};

HolderReport holder_uniformity_study(const VVConfig& cfg);
HolderReport holder_uniformity_study(const VVConfig& cfg, const Sweep& sweep);

/// `vv_report.csv`: header nu,l2_err,linf_err,h1_w,mass_mu,theta_inf,holder,
/// one row per ν, then `# slope_l2=..., slope_linf=..., r2=...`.
void write_vv_report(std::ostream& out, const RateReport& report);

/// H1 norm of w - θ with ∇θ evaluated from the closed-form derivative of
/// f(r) x rather than spectrally (τ0 is not periodic).
double h1_norm_corrected(const VectorField& w, const VectorField& theta, const RadialProfile& g0, double scale);

}  // namespace agg
