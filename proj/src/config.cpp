#include "agg/config.hpp"

#include "agg/agf.hpp"
#include "agg/error.hpp"
#include "agg/initial.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace agg {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_real(std::string_view v, int line) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        throw ParseError(line, "expected a number, got '" + std::string(v) + "'");
    }
    return out;
}

long long to_integer(std::string_view v, int line) {
    long long out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ParseError(line, "expected an integer, got '" + std::string(v) + "'");
    return out;
}

bool to_bool(std::string_view v, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ParseError(line, "expected true or false, got '" + std::string(v) + "'");
}

void require(bool ok, int line, const std::string& reason) {
    if (!ok) throw ParseError(line, reason);
}

using Setter = std::function<void(RunConfig&, std::string_view, int)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"sigma1", [](RunConfig& c, std::string_view v, int l) {
             c.sim.sigma1 = to_real(v, l);
             require(c.sim.sigma1 != 0.0, l, "sigma1 must be nonzero");
         }},
        {"sigma2", [](RunConfig& c, std::string_view v, int l) { c.sim.sigma2 = to_real(v, l); }},
        {"nu", [](RunConfig& c, std::string_view v, int l) {
             c.sim.nu = to_real(v, l);
             require(c.sim.nu >= 0.0, l, "nu must be >= 0");
         }},
        {"dt", [](RunConfig& c, std::string_view v, int l) {
             c.sim.dt = to_real(v, l);
             require(c.sim.dt > 0.0, l, "dt must be > 0");
         }},
        {"t_end", [](RunConfig& c, std::string_view v, int l) {
             c.sim.t_end = to_real(v, l);
             require(c.sim.t_end >= 0.0, l, "t_end must be >= 0");
         }},
        {"cfl", [](RunConfig& c, std::string_view v, int l) {
             c.sim.cfl = to_real(v, l);
             require(c.sim.cfl > 0.0 && c.sim.cfl <= 1.0, l, "cfl must lie in (0, 1]");
         }},
        {"blowup_guard", [](RunConfig& c, std::string_view v, int l) {
             c.sim.blowup_guard = to_real(v, l);
             require(c.sim.blowup_guard > 0.0 && c.sim.blowup_guard < 1.0, l, "blowup_guard must lie in (0, 1)");
         }},
        {"velocity_floor", [](RunConfig& c, std::string_view v, int l) {
             c.sim.velocity_floor = to_real(v, l);
             require(c.sim.velocity_floor > 0.0, l, "velocity_floor must be > 0");
         }},
        {"positivity_floor", [](RunConfig& c, std::string_view v, int l) {
             c.sim.positivity_floor = to_real(v, l);
             require(c.sim.positivity_floor > 0.0, l, "positivity_floor must be > 0");
         }},
        {"mean_field", [](RunConfig& c, std::string_view v, int l) { c.sim.mean_field = to_bool(v, l); }},
        {"snapshot_every", [](RunConfig& c, std::string_view v, int l) {
             const auto k = to_integer(v, l);
             require(k >= 0 && k < (1LL << 30), l, "snapshot_every must be >= 0");
             c.sim.snapshot_every = static_cast<int>(k);
         }},
        {"d", [](RunConfig& c, std::string_view v, int l) {
             const auto k = to_integer(v, l);
             require(k == 2 || k == 3, l, "d must be 2 or 3");
             c.d = static_cast<int>(k);
         }},
        {"n", [](RunConfig& c, std::string_view v, int l) {
             const auto k = to_integer(v, l);
             require(k >= 8 && k <= (1 << 14) && (k & (k - 1)) == 0, l, "n must be a power of two >= 8");
             c.n = static_cast<int>(k);
         }},
        {"L", [](RunConfig& c, std::string_view v, int l) {
             c.L = to_real(v, l);
             require(c.L > 0.0, l, "L must be > 0");
         }},
        {"solver", [](RunConfig& c, std::string_view v, int l) {
             require(v == "viscous" || v == "inviscid", l, "solver must be viscous or inviscid");
             c.solver = std::string(v);
         }},
        {"init", [](RunConfig& c, std::string_view v, int l) {
             require(v == "gaussian" || v == "patch" || v == "two_bumps" || v == "file", l,
                     "init must be gaussian, patch, two_bumps or file");
             c.init.kind = std::string(v);
         }},
        {"amplitude", [](RunConfig& c, std::string_view v, int l) { c.init.amplitude = to_real(v, l); }},
        {"width", [](RunConfig& c, std::string_view v, int l) {
             c.init.width = to_real(v, l);
             require(c.init.width > 0.0, l, "width must be > 0");
         }},
        {"support", [](RunConfig& c, std::string_view v, int l) {
             c.init.support = to_real(v, l);
             require(c.init.support >= 0.0, l, "support must be >= 0");
         }},
        {"patch_c", [](RunConfig& c, std::string_view v, int l) { c.init.patch_c = to_real(v, l); }},
        {"patch_r0", [](RunConfig& c, std::string_view v, int l) {
             c.init.patch_r0 = to_real(v, l);
             require(c.init.patch_r0 > 0.0, l, "patch_r0 must be > 0");
         }},
        {"smoothing", [](RunConfig& c, std::string_view v, int l) {
             c.init.smoothing = to_real(v, l);
             require(c.init.smoothing >= 0.0, l, "smoothing must be >= 0");
         }},
        {"file", [](RunConfig& c, std::string_view v, int) { c.init.file = std::string(v); }},
        {"observe_every", [](RunConfig& c, std::string_view v, int l) {
             const auto k = to_integer(v, l);
             require(k >= 1 && k < (1LL << 30), l, "observe_every must be >= 1");
             c.observe_every = static_cast<int>(k);
         }},
        {"output_dir", [](RunConfig& c, std::string_view v, int l) {
             require(!v.empty(), l, "output_dir must not be empty");
             c.output_dir = std::string(v);
         }},
        {"seed", [](RunConfig& c, std::string_view v, int l) {
             const auto k = to_integer(v, l);
             require(k >= 0, l, "seed must be >= 0");
             c.seed = static_cast<std::uint64_t>(k);
         }},
        {"nu_list", [](RunConfig& c, std::string_view v, int l) {
             c.nu_list.clear();
             std::size_t pos = 0;
             while (pos <= v.size()) {
                 const auto comma = v.find(',', pos);
                 const auto item = trim(v.substr(pos, comma == std::string_view::npos ? v.npos : comma - pos));
                 require(!item.empty(), l, "empty entry in nu_list");
                 const double nu = to_real(item, l);
                 require(nu > 0.0, l, "nu_list entries must be > 0");
                 require(c.nu_list.empty() || nu <= c.nu_list.back(), l, "nu_list must be nonincreasing");
                 c.nu_list.push_back(nu);
                 if (comma == std::string_view::npos) break;
                 pos = comma + 1;
             }
         }},
        {"t_eval", [](RunConfig& c, std::string_view v, int l) {
             c.t_eval = to_real(v, l);
             require(c.t_eval > 0.0, l, "t_eval must be > 0");
         }},
        {"beta", [](RunConfig& c, std::string_view v, int l) {
             c.beta = to_real(v, l);
             require(c.beta > 0.0 && c.beta < 1.0, l, "beta must lie in (0, 1)");
         }},
        {"holder_beta", [](RunConfig& c, std::string_view v, int l) {
             c.holder_beta = to_real(v, l);
             require(c.holder_beta > 0.0 && c.holder_beta < 1.0, l, "holder_beta must lie in (0, 1)");
         }},
    };
    return table;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::map<std::string, int, std::less<>> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "missing key");
        if (value.empty()) throw ParseError(line_no, "missing value for '" + std::string(key) + "'");
        const auto it = setters().find(key);
        if (it == setters().end()) throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
        if (seen.count(key)) throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
        seen.emplace(std::string(key), line_no);
        it->second(cfg, value, line_no);
    }

    auto line_of = [&](std::initializer_list<const char*> keys) {
        int best = 0;
        for (const char* k : keys) {
            const auto f = seen.find(std::string_view(k));
            if (f != seen.end()) best = std::max(best, f->second);
        }
        return best;
    };
    if (cfg.nu_list.size() < 1) throw ParseError(line_of({"nu_list"}), "nu_list must not be empty");
    if (cfg.init.kind == "file" && cfg.init.file.empty()) {
        throw ParseError(line_of({"init"}), "init = file requires a 'file' key");
    }
    if (cfg.init.kind == "patch") {
        const double w = cfg.init.smoothing > 0.0 ? cfg.init.smoothing : 2.0 * cfg.L / cfg.n;
        if (!(8.0 * w < cfg.init.patch_r0)) {
            throw ParseError(line_of({"smoothing", "patch_r0", "n", "L"}), "patch smoothing must be below patch_r0/8");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const RunConfig& c) {
    auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream o;
    o << "sigma1 = " << num(c.sim.sigma1) << "\n"
      << "sigma2 = " << num(c.sim.sigma2) << "\n"
      << "nu = " << num(c.sim.nu) << "\n"
      << "dt = " << num(c.sim.dt) << "\n"
      << "t_end = " << num(c.sim.t_end) << "\n"
      << "cfl = " << num(c.sim.cfl) << "\n"
      << "blowup_guard = " << num(c.sim.blowup_guard) << "\n"
      << "velocity_floor = " << num(c.sim.velocity_floor) << "\n"
      << "positivity_floor = " << num(c.sim.positivity_floor) << "\n"
      << "mean_field = " << (c.sim.mean_field ? "true" : "false") << "\n"
      << "snapshot_every = " << c.sim.snapshot_every << "\n"
      << "d = " << c.d << "\n"
      << "n = " << c.n << "\n"
      << "L = " << num(c.L) << "\n"
      << "solver = " << c.solver << "\n"
      << "init = " << c.init.kind << "\n"
      << "amplitude = " << num(c.init.amplitude) << "\n"
      << "width = " << num(c.init.width) << "\n"
      << "support = " << num(c.init.support) << "\n"
      << "patch_c = " << num(c.init.patch_c) << "\n"
      << "patch_r0 = " << num(c.init.patch_r0) << "\n"
      << "smoothing = " << num(c.init.smoothing) << "\n";
    if (!c.init.file.empty()) o << "file = " << c.init.file << "\n";
    o << "observe_every = " << c.observe_every << "\n"
      << "output_dir = " << c.output_dir << "\n"
      << "seed = " << c.seed << "\n"
      << "nu_list = ";
    for (std::size_t i = 0; i < c.nu_list.size(); ++i) o << (i ? ", " : "") << num(c.nu_list[i]);
    o << "\n"
      << "t_eval = " << num(c.t_eval) << "\n"
      << "beta = " << num(c.beta) << "\n"
      << "holder_beta = " << num(c.holder_beta) << "\n";
    return o.str();
}

ScalarField make_initial(const RunConfig& cfg) { return make_initial(cfg.init, cfg.grid()); }

ScalarField make_initial(const InitSpec& s, const Grid& grid) {
    const double support = s.support > 0.0 ? s.support : 4.0 * s.width;
    if (s.kind == "gaussian") return sample_radial(grid, gaussian_profile(s.amplitude, s.width, support));
    if (s.kind == "patch") {
        const double w = s.smoothing > 0.0 ? s.smoothing : 2.0 * grid.spacing();
        return sample_radial(grid, patch_profile(s.patch_c, s.patch_r0, w));
    }
    if (s.kind == "two_bumps") return two_bumps(grid, s.amplitude, s.width, support);
    if (s.kind == "file") {
        ScalarField f = read_agf(s.file);
        if (f.grid != grid) throw InvalidArgument("initial field file grid does not match d, n, L");
        f.time = 0.0;
        return f;
    }
    throw InvalidArgument("unknown initial condition kind '" + s.kind + "'");
}

}  // namespace agg
