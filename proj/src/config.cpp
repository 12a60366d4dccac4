#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nsfg {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Parser {
    std::vector<std::string> errors;

    bool to_double(const std::string& key, const std::string& v, double& out) {
        try {
            size_t pos = 0;
            out = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return true;
        } catch (...) {
            errors.push_back(key + ": not a number: '" + v + "'");
            return false;
        }
    }
    bool to_int(const std::string& key, const std::string& v, int& out) {
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || p != v.data() + v.size()) {
            errors.push_back(key + ": not an integer: '" + v + "'");
            return false;
        }
        return true;
    }
    bool to_uint(const std::string& key, const std::string& v, unsigned& out) {
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || p != v.data() + v.size()) {
            errors.push_back(key + ": not an unsigned integer: '" + v + "'");
            return false;
        }
        return true;
    }
    bool to_bool(const std::string& key, const std::string& v, bool& out) {
        if (v == "true" || v == "1") { out = true; return true; }
        if (v == "false" || v == "0") { out = false; return true; }
        errors.push_back(key + ": not a boolean (true/false): '" + v + "'");
        return false;
    }
};

void validate(const RunConfig& c, std::vector<std::string>& errors) {
    auto bad = [&](const std::string& msg) { errors.push_back(msg); };
    if (c.dim < 1 || c.dim > 3) bad("grid.dim: must be 1, 2, or 3");
    if (c.points < 8) bad("grid.points: must be >= 8");
    if (c.points % 2 != 0) bad("grid.points: must be even");
    if (!(c.length > 0.0)) bad("grid.length: must be > 0");
    if (c.modes < 1) bad("galerkin.modes: must be >= 1");
    if (!(c.dt > 0.0)) bad("time.dt: must be > 0");
    if (!(c.t_end >= 0.0)) bad("time.t_end: must be >= 0");
    const Params& p = c.params;
    if (p.eps < 0.0) bad("params.eps: must be >= 0");
    if (p.kappa_q < 0.0) bad("params.kappa_q: must be >= 0");
    if (p.r0 < 0.0) bad("params.r0: must be >= 0");
    if (p.r1 < 0.0) bad("params.r1: must be >= 0");
    if (p.law.alpha < 2.0) bad("params.alpha: must be >= 2");
    if (!(p.law.c1 > 0.0 && p.law.c1 <= 1.0)) bad("params.c1: must be in (0, 1]");
    else if (p.law.kappa0 < p.law.c1 || p.law.kappa0 > 1.0 / p.law.c1)
        bad("params.kappa0: must lie in [c1, 1/c1]");
    const InitialSpec& ic = c.initial;
    static const std::set<std::string> presets = {"equilibrium", "density-bump", "shear",
                                                  "hot-spot", "random-trig"};
    if (!presets.count(ic.preset)) bad("initial.preset: unknown preset '" + ic.preset + "'");
    if (!(ic.nu > 0.0)) bad("initial.nu: must be > 0");
    if (ic.amplitude < 0.0) bad("initial.amplitude: must be >= 0");
    if (ic.wavenumber < 0) bad("initial.wavenumber: must be >= 0");
    if (ic.wavenumber < 1 && ic.preset == "random-trig")
        bad("initial.wavenumber: must be >= 1 for random-trig");
    if (!(ic.theta0 > 0.0)) bad("initial.theta0: must be > 0");
    if (ic.preset == "density-bump" && 1.0 - ic.amplitude < ic.nu)
        bad("initial.amplitude: density-bump floor 1 - amplitude falls below nu");
    if (ic.preset == "hot-spot" && !(ic.theta0 - ic.amplitude > 0.0))
        bad("initial.amplitude: hot-spot floor theta0 - amplitude must be > 0");
    if (c.output.cadence < 1) bad("output.cadence: must be >= 1");
    if (c.output.directory.empty()) bad("output.directory: must be nonempty");
    if (!(c.cutoffs.n > 0.0)) bad("cutoffs.n: must be > 0");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    Parser ps;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                ps.errors.push_back("line " + std::to_string(lineno) + ": malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            static const std::set<std::string> sections = {"grid", "time", "galerkin", "params",
                                                           "initial", "cutoffs", "output"};
            if (!sections.count(section)) {
                ps.errors.push_back("unknown section [" + section + "]");
                section = "";
            }
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            ps.errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        std::string full = section + "." + key;
        if (section.empty()) {
            ps.errors.push_back("key '" + key + "' outside any section");
            continue;
        }
        bool known = true;
        if (section == "grid") {
            if (key == "dim") ps.to_int(full, val, c.dim);
            else if (key == "points") ps.to_int(full, val, c.points);
            else if (key == "length") ps.to_double(full, val, c.length);
            else known = false;
        } else if (section == "time") {
            if (key == "dt") ps.to_double(full, val, c.dt);
            else if (key == "t_end") ps.to_double(full, val, c.t_end);
            else known = false;
        } else if (section == "galerkin") {
            if (key == "modes") ps.to_int(full, val, c.modes);
            else known = false;
        } else if (section == "params") {
            Params& p = c.params;
            if (key == "eps") ps.to_double(full, val, p.eps);
            else if (key == "kappa_q") ps.to_double(full, val, p.kappa_q);
            else if (key == "r0") ps.to_double(full, val, p.r0);
            else if (key == "r1") ps.to_double(full, val, p.r1);
            else if (key == "eps_bi") ps.to_double(full, val, p.eps_bi);
            else if (key == "eps_cold") ps.to_double(full, val, p.eps_cold);
            else if (key == "eps_cross") ps.to_double(full, val, p.eps_cross);
            else if (key == "eps_hyper") ps.to_double(full, val, p.eps_hyper);
            else if (key == "eps_mass") ps.to_double(full, val, p.eps_mass);
            else if (key == "eps_sink") ps.to_double(full, val, p.eps_sink);
            else if (key == "alpha") ps.to_double(full, val, p.law.alpha);
            else if (key == "kappa0") ps.to_double(full, val, p.law.kappa0);
            else if (key == "c1") ps.to_double(full, val, p.law.c1);
            else known = false;
        } else if (section == "initial") {
            InitialSpec& ic = c.initial;
            if (key == "preset") ic.preset = val;
            else if (key == "amplitude") ps.to_double(full, val, ic.amplitude);
            else if (key == "wavenumber") ps.to_int(full, val, ic.wavenumber);
            else if (key == "seed") ps.to_uint(full, val, ic.seed);
            else if (key == "nu") ps.to_double(full, val, ic.nu);
            else if (key == "theta0") ps.to_double(full, val, ic.theta0);
            else known = false;
        } else if (section == "cutoffs") {
            if (key == "n") ps.to_double(full, val, c.cutoffs.n);
            else if (key == "m") ps.to_double(full, val, c.cutoffs.m);
            else if (key == "K") ps.to_double(full, val, c.cutoffs.K);
            else known = false;
        } else if (section == "output") {
            OutputSpec& o = c.output;
            if (key == "directory") o.directory = val;
            else if (key == "cadence") ps.to_int(full, val, o.cadence);
            else if (key == "snapshot_final") ps.to_bool(full, val, o.snapshot_final);
            else known = false;
        }
        if (!known) ps.errors.push_back("unknown key '" + full + "'");
    }
    if (ps.errors.empty()) validate(c, ps.errors);
    if (!ps.errors.empty()) {
        std::string msg = "config errors:";
        for (const std::string& e : ps.errors) msg += "\n  - " + e;
        throw std::invalid_argument(msg);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
    char out[2048];
    const Params& p = c.params;
    const InitialSpec& ic = c.initial;
    std::snprintf(out, sizeof(out),
                  "[grid]\ndim = %d\npoints = %d\nlength = %.17g\n\n"
                  "[time]\ndt = %.17g\nt_end = %.17g\n\n"
                  "[galerkin]\nmodes = %d\n\n"
                  "[params]\neps = %.17g\nkappa_q = %.17g\nr0 = %.17g\nr1 = %.17g\n"
                  "eps_bi = %.17g\neps_cold = %.17g\neps_cross = %.17g\neps_hyper = %.17g\n"
                  "eps_mass = %.17g\neps_sink = %.17g\n"
                  "alpha = %.17g\nkappa0 = %.17g\nc1 = %.17g\n\n"
                  "[initial]\npreset = %s\namplitude = %.17g\nwavenumber = %d\nseed = %u\n"
                  "nu = %.17g\ntheta0 = %.17g\n\n"
                  "[cutoffs]\nn = %.17g\nm = %.17g\nK = %.17g\n\n"
                  "[output]\ndirectory = %s\ncadence = %d\nsnapshot_final = %s\n",
                  c.dim, c.points, c.length, c.dt, c.t_end, c.modes, p.eps, p.kappa_q, p.r0, p.r1,
                  p.eps_bi, p.eps_cold, p.eps_cross, p.eps_hyper, p.eps_mass, p.eps_sink,
                  p.law.alpha, p.law.kappa0, p.law.c1, ic.preset.c_str(), ic.amplitude,
                  ic.wavenumber, ic.seed, ic.nu, ic.theta0, c.cutoffs.n, c.cutoffs.m, c.cutoffs.K,
                  c.output.directory.c_str(), c.output.cadence,
                  c.output.snapshot_final ? "true" : "false");
    return out;
}

}  // namespace nsfg
