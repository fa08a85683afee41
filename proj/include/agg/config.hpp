#pragma once

#include "agg/grid.hpp"
#include "agg/params.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace agg {

/// Built-in initial data.
struct InitSpec {
    std::string kind = "gaussian";  ///< gaussian | patch | two_bumps | file
    double amplitude = 1.0;
    double width = 0.5;
    double support = 0.0;           ///< gaussian truncation radius; 0 means 4 * width
    double patch_c = 1.0;
    double patch_r0 = 0.5;
    double smoothing = 0.0;         ///< mollifier width; 0 means 2h
    std::string file;
};

/// Resolved run configuration.
struct RunConfig {
    SimParams sim;
    int d = 2;
    int n = 256;
    double L = 8.0;
    InitSpec init;
    std::string solver = "viscous";  ///< viscous | inviscid
    int observe_every = 10;
    std::string output_dir = "out";
    std::uint64_t seed = 1;
    // sweep keys
    std::vector<double> nu_list{1e-2, 5e-3, 2.5e-3, 1.25e-3};
    double t_eval = 0.5;
    double beta = 0.9;
    double holder_beta = 0.5;

    Grid grid() const { return Grid(d, n, L); }
};

/// Strict `key = value` parser: '#' starts a comment, blank lines are skipped,
/// unknown or repeated keys are errors, every constraint is checked against
/// the line that set it. Throws ParseError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical `key = value` text of every key, readable by parse_config.
std::string format_config(const RunConfig& cfg);

/// Samples the initial density described by an InitSpec.
ScalarField make_initial(const InitSpec& init, const Grid& grid);
ScalarField make_initial(const RunConfig& cfg);

}  // namespace agg
