// aggsim: command-line front end for the aggregation solvers and studies.

#include "agg/agf.hpp"
#include "agg/config.hpp"
#include "agg/diagnostics.hpp"
#include "agg/dyadic.hpp"
#include "agg/error.hpp"
#include "agg/harness.hpp"
#include "agg/initial.hpp"
#include "agg/inviscid.hpp"
#include "agg/oracles.hpp"
#include "agg/viscous.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace agg;

namespace {

constexpr const char* kVersion = "aggsim 1.0.0";

enum Exit { kOk = 0, kConfigError = 1, kSolverError = 2, kCheckFailed = 3 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string wall_clock() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

/// Loads the config file (if any) and applies `key = value` overrides after it.
RunConfig resolve_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::string text;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    // overrides replace earlier lines for the same key
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
        std::string key = o.substr(0, eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        std::istringstream lines(text);
        std::string kept, line;
        while (std::getline(lines, line)) {
            std::string body = line.substr(0, line.find('#'));
            const auto e = body.find('=');
            std::string k = e == std::string::npos ? "" : body.substr(0, e);
            k.erase(0, k.find_first_not_of(" \t"));
            if (!k.empty()) k.erase(k.find_last_not_of(" \t") + 1);
            kept += (k == key ? std::string("# overridden: ") + line : line) + "\n";
        }
        text = kept + key + " = " + o.substr(eq + 1) + "\n";
    }
    return parse_config(text);
}

fs::path prepare_output(const RunConfig& cfg, const std::string& command) {
    const fs::path dir = cfg.output_dir;
    fs::create_directories(dir);
    std::ofstream(dir / "manifest.txt") << "# aggsim " << command << "\n" << format_config(cfg);
    return dir;
}

void write_timestamps(const fs::path& dir, const std::string& start) {
    std::ofstream(dir / "timestamps.txt") << "start = " << start << "\nend = " << wall_clock() << "\n";
}

int cmd_info() {
    std::cout << kVersion << "\n\n# defaults\n" << format_config(RunConfig{});
    return kOk;
}

int cmd_run(const RunConfig& cfg) {
    const std::string start = wall_clock();
    const fs::path dir = prepare_output(cfg, "run");
    const ScalarField rho0 = make_initial(cfg);
    SimParams p = cfg.sim;
    if (cfg.solver == "inviscid") p.nu = 0.0;

    const double L = cfg.L;
    std::vector<DiagnosticsRow> rows;
    const Observer obs{cfg.observe_every, [&](const ScalarField& rho) {
                           DiagnosticsRow r;
                           r.t = rho.time;
                           r.mass = total_mass(rho);
                           r.l2 = lp_norm(rho, 2.0);
                           r.linf = lp_norm(rho, kInfinity);
                           r.holder_beta = holder_star_norm(rho, cfg.holder_beta);
                           r.tail_r1 = tail_norm(rho, L / 8.0);
                           r.tail_r2 = tail_norm(rho, L / 5.0);
                           rows.push_back(r);
                       }};
    const std::vector<Observer> observers{obs};
    const Trajectory traj = cfg.solver == "inviscid" ? run_inviscid(rho0, p, observers) : run_viscous(rho0, p, observers);

    const auto residuals = traj.ledger.residuals(p.sigma1 + p.sigma2);
    for (auto& r : rows) {
        for (std::size_t k = 0; k < traj.ledger.size(); ++k) {
            if (std::abs(traj.ledger.times[k] - r.t) <= 1e-12 * std::max(1.0, r.t)) {
                r.ledger_residual = residuals[k];
                break;
            }
        }
    }
    {
        std::ofstream csv(dir / "diagnostics.csv");
        write_diagnostics_header(csv);
        for (const auto& r : rows) write_diagnostics_row(csv, r);
    }
    for (const auto& snap : traj.snapshots) write_agf(dir / snapshot_filename(snap.time), snap);
    write_timestamps(dir, start);

    std::cout << "steps " << traj.steps << ", t = " << format_sci(traj.final_state.time)
              << ", mass = " << format_sci(total_mass(traj.final_state))
              << ", linf = " << format_sci(lp_norm(traj.final_state, kInfinity)) << "\n"
              << "amplitude bound " << (traj.amplitude_bound_holds(p.sigma2) ? "holds" : "VIOLATED") << "\n";
    return kOk;
}

int cmd_vv(const RunConfig& cfg, bool check, bool pilot) {
    const std::string start = wall_clock();
    const fs::path dir = prepare_output(cfg, "vv");
    VVConfig vv = vv_config_from(cfg);
    vv.pilot = pilot;
    const Sweep sweep = run_sweep(vv);
    const RateReport rep = vv_study(vv, sweep);
    {
        std::ofstream out(dir / "vv_report.csv");
        write_vv_report(out, rep);
    }
    write_vv_report(std::cout, rep);

    bool ok = rep.fitted && rep.l2.slope >= 0.4 && rep.l2.slope <= 0.6 && rep.l2.r2 >= 0.98 &&
              rep.linf.slope >= rep.linf_threshold && rep.h1.slope >= 0.4;
    std::cout << "# l2 slope " << format_sci(rep.l2.slope) << " (band [0.4, 0.6], r2 >= 0.98)\n"
              << "# linf slope " << format_sci(rep.linf.slope) << " (>= " << format_sci(rep.linf_threshold) << ")\n"
              << "# h1 slope " << format_sci(rep.h1.slope) << " (>= 0.4)\n";

    if (cfg.d == 2 && cfg.sim.sigma1 + cfg.sim.sigma2 != 0.0) {
        const CorrectorReport cr = corrector_study(vv, sweep);
        std::ofstream out(dir / "corrector_report.csv");
        out << "nu,mass_mu,theta_inf,h1_w_tilde,identity_error\n";
        for (const auto& r : cr.rows) {
            out << format_sci(r.nu) << ',' << format_sci(r.mass_mu) << ',' << format_sci(r.theta_inf) << ','
                << format_sci(r.h1_w_tilde) << ',' << format_sci(r.identity_error) << '\n';
        }
        out << "# slope_theta=" << format_sci(cr.theta.slope) << ", identity_max=" << format_sci(cr.identity_max)
            << ", g0_invariance=" << format_sci(cr.invariance_error) << '\n';
        std::cout << "# theta slope " << format_sci(cr.theta.slope) << " (>= 0.4), identity "
                  << format_sci(cr.identity_max) << ", g0 invariance " << format_sci(cr.invariance_error) << "\n";
        ok = ok && cr.fitted && cr.theta.slope >= 0.4 && cr.identity_max <= 1e-12 && cr.invariance_error <= 1e-10;
    }
    write_timestamps(dir, start);
    if (check && !ok) {
        std::cerr << "check failed\n";
        return kCheckFailed;
    }
    return kOk;
}

int cmd_holder(const RunConfig& cfg, bool check) {
    const std::string start = wall_clock();
    const fs::path dir = prepare_output(cfg, "holder");
    const VVConfig vv = vv_config_from(cfg);
    const HolderReport rep = holder_uniformity_study(vv);
    std::ofstream out(dir / "holder_report.csv");
    out << "nu,holder_sup\n";
    for (const auto& r : rep.rows) out << format_sci(r.nu) << ',' << format_sci(r.holder_sup) << '\n';
    out << "# beta=" << format_sci(rep.beta) << ", inviscid=" << format_sci(rep.inviscid)
        << ", ratio=" << format_sci(rep.ratio) << '\n';
    std::cout << "holder C^" << rep.beta << "_* ratio max/min over nu: " << format_sci(rep.ratio) << "\n";
    write_timestamps(dir, start);
    if (check && !(rep.ratio <= 1.25)) {
        std::cerr << "check failed\n";
        return kCheckFailed;
    }
    return kOk;
}

int cmd_oracle(const RunConfig& cfg, const std::string& kind, int shells) {
    const std::string start = wall_clock();
    const fs::path dir = prepare_output(cfg, "oracle");
    SimParams p = cfg.sim;
    p.nu = 0.0;
    const double t = cfg.sim.t_end;
    if (kind == "patch") {
        std::ofstream out(dir / "patch_reference.csv");
        out << "t,density,radius\n";
        const int steps = 20;
        for (int k = 0; k <= steps; ++k) {
            const double tk = t * k / steps;
            const PatchState s = patch_reference(cfg.init.patch_c, cfg.init.patch_r0, p.sigma1, p.sigma2, cfg.d, tk);
            out << format_sci(tk) << ',' << format_sci(s.density) << ',' << format_sci(s.radius) << '\n';
        }
    } else {
        const Grid grid = cfg.grid();
        RadialProfile prof;
        if (cfg.init.kind == "patch") {
            prof = patch_profile(cfg.init.patch_c, cfg.init.patch_r0,
                                 cfg.init.smoothing > 0.0 ? cfg.init.smoothing : 2.0 * grid.spacing());
        } else if (cfg.init.kind == "gaussian") {
            prof = gaussian_profile(cfg.init.amplitude, cfg.init.width,
                                    cfg.init.support > 0.0 ? cfg.init.support : 4.0 * cfg.init.width);
        } else {
            throw ConfigError("radial oracle needs init = gaussian or patch");
        }
        const RadialProfile ref = radial_reference(prof, p, t, shells, cfg.d);
        std::ofstream out(dir / "radial_reference.csv");
        out << "r,value\n";
        for (std::size_t i = 0; i < ref.radii.size(); ++i) {
            out << format_sci(ref.radii[i]) << ',' << format_sci(ref.values[i]) << '\n';
        }
    }
    write_timestamps(dir, start);
    std::cout << "wrote " << (dir / (kind == "patch" ? "patch_reference.csv" : "radial_reference.csv")).string()
              << "\n";
    return kOk;
}

int cmd_norms(const std::string& file, double beta) {
    const ScalarField f = read_agf(file);
    const double L = f.grid.box_length();
    std::cout << "d = " << f.grid.dimension() << ", n = " << f.grid.points_per_axis() << ", L = " << format_sci(L)
              << ", t = " << format_sci(f.time) << "\n"
              << "mass = " << format_sci(total_mass(f)) << "\n"
              << "l1 = " << format_sci(lp_norm(f, 1.0)) << "\n"
              << "l2 = " << format_sci(lp_norm(f, 2.0)) << "\n"
              << "linf = " << format_sci(lp_norm(f, kInfinity)) << "\n"
              << "holder_" << beta << " = " << format_sci(holder_star_norm(f, beta)) << "\n"
              << "tail_L/8 = " << format_sci(tail_norm(f, L / 8.0)) << "\n"
              << "tail_L/5 = " << format_sci(tail_norm(f, L / 5.0)) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and verification suite for the generalized aggregation equation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string config_path;
    std::vector<std::string> overrides;
    bool check = false;
    bool pilot = false;
    std::string oracle_kind = "patch";
    int shells = 512;
    std::string agf_file;
    double beta = 0.5;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "Config file (key = value lines)");
        sub->add_option("-s,--set", overrides, "Override a config key, key=value (repeatable)");
    };

    CLI::App* run = app.add_subcommand("run", "Single viscous or inviscid run");
    add_config(run);
    CLI::App* vv = app.add_subcommand("vv", "Vanishing-viscosity sweep with rate fits and corrector study");
    add_config(vv);
    vv->add_flag("--check", check, "Exit 3 if a rate falls outside its acceptance band");
    vv->add_flag("--pilot", pilot, "Estimate the grid-refinement floor with a 2x inviscid pilot");
    CLI::App* holder = app.add_subcommand("holder", "Uniform-in-viscosity Hölder study");
    add_config(holder);
    holder->add_flag("--check", check, "Exit 3 if the max/min ratio exceeds 1.25");
    CLI::App* oracle = app.add_subcommand("oracle", "Patch or radial reference tables");
    add_config(oracle);
    oracle->add_option("-k,--kind", oracle_kind, "patch or radial")->check(CLI::IsMember({"patch", "radial"}));
    oracle->add_option("--shells", shells, "Radial shells")->check(CLI::PositiveNumber);
    CLI::App* norms = app.add_subcommand("norms", "One-shot diagnostics of an AGF1 field");
    norms->add_option("file", agf_file, "Field file")->required();
    norms->add_option("--beta", beta, "Hölder exponent")->check(CLI::Range(0.0, 1.0));
    app.add_subcommand("info", "Version and defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (app.got_subcommand("info")) return cmd_info();
        if (app.got_subcommand("norms")) return cmd_norms(agf_file, beta);
        const RunConfig cfg = resolve_config(config_path, overrides);
        if (app.got_subcommand("run")) return cmd_run(cfg);
        if (app.got_subcommand("vv")) return cmd_vv(cfg, check, pilot);
        if (app.got_subcommand("holder")) return cmd_holder(cfg, check);
        if (app.got_subcommand("oracle")) return cmd_oracle(cfg, oracle_kind, shells);
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const FormatError& e) {
        std::cerr << "file error: " << e.what() << "\n";
        return kConfigError;
    } catch (const InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const BlowupImminent& e) {
        std::cerr << "BlowupImminent: " << e.what() << "\n";
        return kSolverError;
    } catch (const Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kSolverError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolverError;
    }
    return kConfigError;
}
