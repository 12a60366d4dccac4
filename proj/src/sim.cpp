#include "sim.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "momentum.hpp"
#include "thermal.hpp"
#include "transport.hpp"

namespace fs = std::filesystem;

namespace nsfg {

namespace {

std::string g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string now_string() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// Random band-limited trig polynomial normalized to max |f| = 1.
ScalarField random_trig(const Grid& grid, int wavenumber, std::mt19937& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<double> c(3 * wavenumber * 2);
    for (double& x : c) x = coef(rng);
    double b = two_pi / grid.length;
    ScalarField f = sample(grid, [&](const std::array<double, 3>& x) {
        double s = 0.0;
        int i = 0;
        for (int d = 0; d < grid.dim; ++d)
            for (int j = 1; j <= wavenumber; ++j) {
                s += c[i] * std::cos(j * b * x[d]) + c[i + 1] * std::sin(j * b * x[d]);
                i += 2;
            }
        return s;
    });
    double m = max_abs(f);
    return m > 0.0 ? scale(f, 1.0 / m) : f;
}

// Name the stiffness contribution that makes dt exceed the stability bound.
std::string binding_term(const SystemState& s, const Params& p) {
    const GalerkinBasis& b = *s.gv.basis;
    double box = two_pi / b.grid.length, k2max = 0.0;
    for (const BasisMode& m : b.modes) {
        double k2 = 0.0;
        for (int d = 0; d < b.grid.dim; ++d) k2 += (m.k[d] * box) * (m.k[d] * box);
        k2max = std::max(k2max, k2);
    }
    VectorField u = reconstruct(s.gv);
    double umax = 0.0;
    for (int d = 0; d < b.grid.dim; ++d) umax = std::max(umax, max_abs(u.comp[d]));
    double rmax = max_value(s.rho);
    double gradr = 0.0;
    VectorField gr = gradient(s.rho);
    for (int d = 0; d < b.grid.dim; ++d) gradr = std::max(gradr, max_abs(gr.comp[d]));

    std::pair<std::string, double> terms[] = {
        {"viscous", 2.0 * rmax * k2max},
        {"biharmonic", p.bi() * k2max * k2max},
        {"hyperdiffusion", p.hyper() * std::pow(k2max, 9.0)},
        {"cross-diffusion", p.cross() * gradr * std::sqrt(k2max)},
        {"linear drag", p.r0},
        {"cubic drag", p.r1 * rmax * umax * umax},
    };
    auto* worst = std::max_element(std::begin(terms), std::end(terms),
                                   [](auto& a, auto& b) { return a.second < b.second; });
    double rate = 0.0;
    for (auto& t : terms) rate += t.second;
    rate /= min_value(s.rho);
    double stiff = rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
    double adv = advective_dt_limit(u);
    return adv < stiff ? "advective CFL" : worst->first;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace

SystemState advance_state(const SystemState& s, const Params& p, double dt) {
    SystemState out = s;
    VectorField u = reconstruct(s.gv);
    out.gv = step_velocity(s, p, dt);
    out.rho = step_density(s.rho, u, p.eps, dt).rho_new;
    out.theta =
        step_temperature(s.theta, s.rho, u, p.law, p.eps, dt, p.eps_mass, p.eps_sink).theta_new;
    out.t = s.t + dt;
    return out;
}

SystemState make_initial_state(const RunConfig& c, std::shared_ptr<const GalerkinBasis> basis) {
    const Grid& grid = basis->grid;
    const InitialSpec& ic = c.initial;
    double b = two_pi / grid.length;
    SystemState s;
    s.rho = make_scalar(grid, 1.0);
    s.gv = zero_velocity(*basis);
    s.theta = make_scalar(grid, ic.theta0);
    s.t = 0.0;

    if (ic.preset == "equilibrium") {
        // defaults
    } else if (ic.preset == "density-bump") {
        s.rho = sample(grid, [&](const std::array<double, 3>& x) {
            return 1.0 + ic.amplitude * std::sin(ic.wavenumber * b * x[0]);
        });
    } else if (ic.preset == "shear") {
        VectorField u = make_vector(grid);
        int axis = grid.dim - 1;  // vary along the last coordinate
        // wavenumber 0 means a spatially constant translation
        u.comp[0] = ic.wavenumber == 0
                        ? make_scalar(grid, ic.amplitude)
                        : sample(grid, [&](const std::array<double, 3>& x) {
                              return ic.amplitude * std::sin(ic.wavenumber * b * x[axis]);
                          });
        s.gv = project(u, *basis);
    } else if (ic.preset == "hot-spot") {
        s.theta = sample(grid, [&](const std::array<double, 3>& x) {
            return ic.theta0 + ic.amplitude * std::cos(ic.wavenumber * b * x[0]);
        });
    } else if (ic.preset == "random-trig") {
        std::mt19937 rng(ic.seed);
        s.rho = shift(scale(random_trig(grid, ic.wavenumber, rng), ic.amplitude), 1.0);
        VectorField u = make_vector(grid);
        for (int d = 0; d < grid.dim; ++d)
            u.comp[d] = scale(random_trig(grid, ic.wavenumber, rng), ic.amplitude);
        s.gv = project(u, *basis);
        s.theta = shift(scale(random_trig(grid, ic.wavenumber, rng), 0.5 * ic.amplitude * ic.theta0),
                        ic.theta0);
    } else {
        throw std::invalid_argument("unknown preset: " + ic.preset);
    }
    s.gv.basis = basis.get();
    if (min_value(s.rho) < ic.nu)
        throw std::invalid_argument("initial density falls below the configured floor nu");
    if (min_value(s.theta) <= 0.0)
        throw std::invalid_argument("initial temperature must be positive");
    return s;
}

std::string csv_header() {
    return "t,mass,E_total,E_kinetic,E_cold,E_capillary,E_hyper,E_internal,"
           "bd_entropy,mv_n,min_rho,min_theta,res_energy,res_bd,res_thermal";
}

std::string csv_row(const FunctionalRecord& r) {
    const double cols[15] = {r.t,     r.mass,      r.E_total,   r.E_kinetic, r.E_cold,
                             r.E_capillary, r.E_hyper, r.E_internal, r.bd,    r.mv_n,
                             r.min_rho,     r.min_theta, r.res_energy, r.res_bd, r.res_thermal};
    std::string out;
    for (int i = 0; i < 15; ++i) {
        if (i) out += ',';
        out += g(cols[i]);
    }
    return out;
}

FunctionalRecord record_for(const SystemState& before, const SystemState& after, const Params& p,
                            double dt, const CutoffSpec& cut) {
    FunctionalRecord r;
    r.t = after.t;
    ConservationReport con = positivity_and_mass(after);
    r.mass = con.mass;
    r.min_rho = con.min_rho;
    r.min_theta = con.min_theta;
    EnergyBreakdown e = energy(after, p);
    r.E_total = e.total;
    r.E_kinetic = e.kinetic;
    r.E_cold = e.cold;
    r.E_capillary = e.capillary;
    r.E_hyper = e.hyper;
    r.E_internal = e.internal;
    r.bd = bd_entropy(after, p);
    r.mv_n = (cut.m > 0.0 && cut.K > 0.0) ? mv_functional(after, cut.n, cut.m, cut.K)
                                          : mv_functional_untruncated(after, cut.n);
    if (dt > 0.0) {
        r.res_energy = energy_dissipation_residual(before, after, p, dt);
        r.res_bd = p.eps > 0.0 ? bd_identity_residual(before, after, p, dt) : 0.0;
        r.res_thermal =
            renormalized_residual(before.theta, after.theta, before.rho, after.rho,
                                  reconstruct(before.gv), make_h_one(), p.law, p.eps, dt);
    }
    return r;
}

void write_snapshot(const std::string& path, const SystemState& s) {
    static_assert(std::endian::native == std::endian::little);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    const GalerkinBasis& b = *s.gv.basis;
    out.write("NSFG1", 5);
    uint32_t dim = b.grid.dim, n = b.grid.n, N = b.N;
    double length = b.grid.length, t = s.t;
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&length), 8);
    out.write(reinterpret_cast<const char*>(&N), 4);
    out.write(reinterpret_cast<const char*>(&t), 8);
    auto arr = [&](const std::vector<double>& v) {
        out.write(reinterpret_cast<const char*>(v.data()), v.size() * 8);
    };
    arr(s.rho.v);
    arr(s.gv.lambda);
    arr(s.theta.v);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, "NSFG1", 5) != 0)
        throw std::runtime_error("bad snapshot magic in " + path);
    uint32_t dim = 0, n = 0, N = 0;
    double length = 0.0, t = 0.0;
    in.read(reinterpret_cast<char*>(&dim), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&length), 8);
    in.read(reinterpret_cast<char*>(&N), 4);
    in.read(reinterpret_cast<char*>(&t), 8);
    if (!in) throw std::runtime_error("truncated snapshot header in " + path);
    Grid grid = make_grid(dim, n, length);
    Snapshot snap;
    snap.basis = std::make_shared<GalerkinBasis>(build_basis(grid, N));
    SystemState& s = snap.state;
    s.rho = make_scalar(grid);
    s.theta = make_scalar(grid);
    s.gv = zero_velocity(*snap.basis);
    s.gv.basis = snap.basis.get();
    s.t = t;
    auto arr = [&](std::vector<double>& v) {
        in.read(reinterpret_cast<char*>(v.data()), v.size() * 8);
    };
    arr(s.rho.v);
    arr(s.gv.lambda);
    arr(s.theta.v);
    if (!in) throw std::runtime_error("truncated snapshot data in " + path);
    return snap;
}

uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    uint64_t h = 14695981039346656037ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    return h;
}

RunResult run(const RunConfig& c) {
    fs::create_directories(c.output.directory);
    auto path = [&](const std::string& name) {
        return (fs::path(c.output.directory) / name).string();
    };
    write_text(path("config.ini"), serialize_config(c));
    std::string start = now_string();
    write_text(path("manifest.txt"), "status = running\nstart = " + start +
                                         "\nversion = 1\nconfig = config.ini\n");

    RunResult res;
    std::vector<std::string> csv_lines{csv_header()};
    std::string snapshot_name;
    try {
        Grid grid = make_grid(c.dim, c.points, c.length);
        res.basis = std::make_shared<GalerkinBasis>(build_basis(grid, c.modes));
        SystemState state = make_initial_state(c, res.basis);
        const Params& p = c.params;
        validate_heat_law(p.law);

        long nsteps = std::lround(c.t_end / c.dt);
        FunctionalRecord first = record_for(state, state, p, 0.0, c.cutoffs);
        res.records.push_back(first);
        csv_lines.push_back(csv_row(first));

        res.termination = "completed";
        for (long step = 1; step <= nsteps; ++step) {
            double lim = stable_dt(state, p);
            if (c.dt > lim) {
                res.termination = "stability bound violated by the " + binding_term(state, p) +
                                  " term: dt = " + g(c.dt) + " > " + g(lim);
                res.exit_code = 1;
                break;
            }
            SystemState next = advance_state(state, p, c.dt);
            if (!all_finite(next.rho) || !all_finite(next.theta) ||
                !std::all_of(next.gv.lambda.begin(), next.gv.lambda.end(),
                             [](double x) { return std::isfinite(x); })) {
                snapshot_name = "state_dump.bin";
                write_snapshot(path(snapshot_name), state);
                res.termination = "NaN detected at t = " + g(next.t) + "; state dumped";
                res.exit_code = 1;
                break;
            }
            if (step % c.output.cadence == 0 || step == nsteps) {
                FunctionalRecord r = record_for(state, next, p, c.dt, c.cutoffs);
                res.records.push_back(r);
                csv_lines.push_back(csv_row(r));
            }
            state = next;
        }
        res.final_state = state;
        if (res.exit_code == 0 && c.output.snapshot_final) {
            snapshot_name = "state_final.bin";
            write_snapshot(path(snapshot_name), state);
        }
    } catch (const std::exception& e) {
        res.termination = e.what();
        res.exit_code = 1;
    }

    std::string csv;
    for (const std::string& l : csv_lines) csv += l + "\n";
    write_text(path("run.csv"), csv);

    std::ostringstream man;
    man << "status = " << (res.exit_code == 0 ? "completed" : "failed") << "\n"
        << "termination = " << res.termination << "\n"
        << "start = " << start << "\nend = " << now_string() << "\nversion = 1\n";
    std::vector<std::string> files = {"config.ini", "run.csv"};
    if (!snapshot_name.empty()) files.push_back(snapshot_name);
    char hex[32];
    for (const std::string& f : files) {
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(fnv1a_file(path(f))));
        man << "file " << f << " fnv1a:" << hex << "\n";
    }
    write_text(path("manifest.txt"), man.str());
    return res;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("slope fit needs >= 2 matched points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("slope fit needs positive values");
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double n = static_cast<double>(x.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SweepSummary sweep(const RunConfig& base, const std::string& axis,
                   const std::vector<double>& values) {
    static const std::set<std::string> axes = {"eps", "kappa_q", "r0",       "r1",      "N",
                                              "dt",  "n_cutoff", "K_cutoff", "m_cutoff"};
    if (!axes.count(axis)) throw std::invalid_argument("unknown sweep axis: " + axis);
    if (values.empty()) throw std::invalid_argument("sweep value list is empty");

    SweepSummary sum;
    sum.axis = axis;
    for (size_t i = 0; i < values.size(); ++i) {
        RunConfig c = base;
        double v = values[i];
        if (axis == "eps") c.params.eps = v;
        else if (axis == "kappa_q") c.params.kappa_q = v;
        else if (axis == "r0") c.params.r0 = v;
        else if (axis == "r1") c.params.r1 = v;
        else if (axis == "N") c.modes = static_cast<int>(v);
        else if (axis == "dt") c.dt = v;
        else if (axis == "n_cutoff") c.cutoffs.n = v;
        else if (axis == "K_cutoff") c.cutoffs.K = v;
        else if (axis == "m_cutoff") c.cutoffs.m = v;
        c.output.directory = (fs::path(base.output.directory) /
                              (axis + "_" + std::to_string(i))).string();
        SweepEntry e;
        e.value = v;
        e.directory = c.output.directory;
        try {
            RunResult r = run(c);
            e.exit_code = r.exit_code;
            e.termination = r.termination;
            if (!r.records.empty()) e.terminal = r.records.back();
        } catch (const std::exception& ex) {
            e.exit_code = 1;
            e.termination = ex.what();
        }
        if (e.exit_code != 0) sum.exit_code = 1;
        sum.entries.push_back(e);
    }

    auto fit = [&](const std::string& name, auto getter) {
        std::vector<double> xs, ys;
        for (const SweepEntry& e : sum.entries)
            if (e.exit_code == 0 && e.value > 0.0 && getter(e.terminal) > 0.0) {
                xs.push_back(e.value);
                ys.push_back(getter(e.terminal));
            }
        if (xs.size() >= 2) sum.slopes[name] = fit_loglog_slope(xs, ys);
    };
    fit("E_cold", [](const FunctionalRecord& r) { return r.E_cold; });
    fit("E_hyper", [](const FunctionalRecord& r) { return r.E_hyper; });
    fit("E_capillary", [](const FunctionalRecord& r) { return r.E_capillary; });
    fit("res_energy", [](const FunctionalRecord& r) { return std::abs(r.res_energy); });
    fit("res_bd", [](const FunctionalRecord& r) { return std::abs(r.res_bd); });
    return sum;
}

std::string SweepSummary::table() const {
    std::ostringstream out;
    out << "axis: " << axis << "\n";
    out << "value,exit,E_total,E_kinetic,E_cold,E_hyper,res_energy,termination\n";
    for (const SweepEntry& e : entries)
        out << g(e.value) << "," << e.exit_code << "," << g(e.terminal.E_total) << ","
            << g(e.terminal.E_kinetic) << "," << g(e.terminal.E_cold) << ","
            << g(e.terminal.E_hyper) << "," << g(e.terminal.res_energy) << "," << e.termination
            << "\n";
    for (const auto& [name, slope] : slopes)
        out << "slope " << name << " = " << g(slope) << "\n";
    return out.str();
}

namespace {

std::string report_one(const fs::path& dir) {
    std::ostringstream out;
    out << "run: " << dir.string() << "\n";
    std::ifstream man(dir / "manifest.txt");
    if (!man) return out.str() + "  manifest: missing\n";
    std::string line;
    bool hashes_ok = true;
    while (std::getline(man, line)) {
        if (line.rfind("file ", 0) == 0) {
            std::istringstream ls(line);
            std::string kw, name, hash;
            ls >> kw >> name >> hash;
            char hex[32];
            bool ok = false;
            try {
                std::snprintf(hex, sizeof(hex), "fnv1a:%016llx",
                              static_cast<unsigned long long>(fnv1a_file((dir / name).string())));
                ok = hash == hex;
            } catch (...) {
            }
            if (!ok) hashes_ok = false;
            out << "  file " << name << ": " << (ok ? "ok" : "HASH MISMATCH") << "\n";
        } else if (line.rfind("status", 0) == 0 || line.rfind("termination", 0) == 0) {
            out << "  " << line << "\n";
        }
    }
    out << "  manifest: " << (hashes_ok ? "verified" : "FAILED") << "\n";
    std::ifstream csv(dir / "run.csv");
    if (csv) {
        std::string header, last;
        std::getline(csv, header);
        while (std::getline(csv, line))
            if (!line.empty()) last = line;
        out << "  columns: " << header << "\n  terminal: " << last << "\n";
    }
    return out.str();
}

}  // namespace

std::string report_directory(const std::string& dir) {
    fs::path root(dir);
    if (!fs::exists(root)) throw std::invalid_argument("no such directory: " + dir);
    if (fs::exists(root / "manifest.txt")) return report_one(root);
    std::vector<fs::path> subs;
    for (const auto& e : fs::directory_iterator(root))
        if (e.is_directory() && fs::exists(e.path() / "manifest.txt")) subs.push_back(e.path());
    std::sort(subs.begin(), subs.end());
    if (subs.empty()) throw std::invalid_argument("no run manifests under: " + dir);
    std::string out;
    for (const fs::path& p : subs) out += report_one(p);
    return out;
}

}  // namespace nsfg
