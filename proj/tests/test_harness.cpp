#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "checks.hpp"
#include "config.hpp"
#include "sim.hpp"

using namespace nsfg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("config: defaults, round trip, parsing") {
    RunConfig c = parse_config("");
    CHECK(c.dim == 1);
    CHECK(c.points == 64);
    CHECK(c.dt == doctest::Approx(1e-3));

    c.params.eps = 0.025;
    c.initial.preset = "density-bump";
    c.initial.seed = 42;
    c.output.directory = "abc";
    RunConfig back = parse_config(serialize_config(c));
    CHECK(back.params.eps == 0.025);
    CHECK(back.initial.preset == "density-bump");
    CHECK(back.initial.seed == 42);
    CHECK(back.output.directory == "abc");
    CHECK(serialize_config(back) == serialize_config(c));

    RunConfig d = parse_config(
        "[grid]\ndim = 2\npoints = 32\n# comment\n[params]\nr0 = 0.5\n[time]\ndt = 1e-4\n");
    CHECK(d.dim == 2);
    CHECK(d.points == 32);
    CHECK(d.params.r0 == 0.5);
    CHECK(d.dt == doctest::Approx(1e-4));
}

TEST_CASE("config: every schema error is listed") {
    auto msg_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const std::invalid_argument& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    std::string m = msg_of("[grid]\ndim = 9\nbogus = 1\n[nope]\nx = 2\n");
    CHECK(m.find("unknown section [nope]") != std::string::npos);
    CHECK(m.find("unknown key 'grid.bogus'") != std::string::npos);

    CHECK(msg_of("[params]\nalpha = 1.5\n").find("alpha") != std::string::npos);
    CHECK(msg_of("[params]\neps = -1\n").find("eps") != std::string::npos);
    CHECK(msg_of("[initial]\nnu = 0\n").find("nu") != std::string::npos);
    CHECK(msg_of("[initial]\npreset = vortex\n").find("vortex") != std::string::npos);
    CHECK(msg_of("[time]\ndt = banana\n").find("banana") != std::string::npos);
    CHECK(msg_of("[params]\nkappa0 = 9\nc1 = 0.5\n").find("kappa0") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/path.ini"), std::invalid_argument);
}

TEST_CASE("log-log slope fit recovers exact power laws") {
    std::vector<double> x = {1e-2, 1e-3, 1e-4};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 1.7));
    CHECK(fit_loglog_slope(x, y) == doctest::Approx(1.7).epsilon(1e-12));
    CHECK_THROWS(fit_loglog_slope({1.0}, {1.0}));
    CHECK_THROWS(fit_loglog_slope({1.0, 2.0}, {1.0, -2.0}));
}

TEST_CASE("snapshot round trip is bitwise") {
    RunConfig c;
    c.initial.preset = "random-trig";
    c.initial.seed = 5;
    auto basis = std::make_shared<GalerkinBasis>(build_basis(make_grid(1, 64), 6));
    SystemState s = make_initial_state(c, basis);
    s.t = 0.625;
    fs::create_directories("harness_out");
    write_snapshot("harness_out/snap.bin", s);
    Snapshot back = read_snapshot("harness_out/snap.bin");
    CHECK(back.state.t == 0.625);
    CHECK(back.basis->N == 6);
    CHECK(back.state.rho.v == s.rho.v);
    CHECK(back.state.gv.lambda == s.gv.lambda);
    CHECK(back.state.theta.v == s.theta.v);
    CHECK_THROWS(read_snapshot("harness_out/missing.bin"));
}

TEST_CASE("fnv1a matches reference digests") {
    std::ofstream("harness_out/empty.bin", std::ios::binary);
    CHECK(fnv1a_file("harness_out/empty.bin") == 0xcbf29ce484222325ull);
    std::ofstream("harness_out/a.bin", std::ios::binary) << "a";
    CHECK(fnv1a_file("harness_out/a.bin") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("equilibrium run: all residual columns vanish, artifacts verified") {
    RunConfig c;
    c.params.eps = 0.0;
    c.params.kappa_q = 0.0;
    c.dt = 1e-3;
    c.t_end = 0.02;
    c.output.directory = "harness_out/eq";
    RunResult r = run(c);
    CHECK(r.exit_code == 0);
    CHECK(r.termination == "completed");
    REQUIRE(r.records.size() > 1);
    for (const FunctionalRecord& rec : r.records) {
        CHECK(std::abs(rec.res_energy) <= 1e-10);
        CHECK(std::abs(rec.res_bd) <= 1e-10);
        CHECK(std::abs(rec.res_thermal) <= 1e-10);
        CHECK(rec.mass == doctest::Approx(two_pi).epsilon(1e-12));
        CHECK(rec.min_rho == doctest::Approx(1.0));
        CHECK(rec.min_theta == doctest::Approx(1.0));
    }
    CHECK(fs::exists("harness_out/eq/run.csv"));
    CHECK(fs::exists("harness_out/eq/state_final.bin"));
    std::string report = report_directory("harness_out/eq");
    CHECK(report.find("manifest: verified") != std::string::npos);
    CHECK(report.find("HASH MISMATCH") == std::string::npos);
}

TEST_CASE("identical configs give bitwise-identical CSV") {
    RunConfig c;
    c.initial.preset = "density-bump";
    c.initial.amplitude = 0.2;
    c.modes = 6;
    c.params.r0 = 0.1;
    c.dt = 1e-3;
    c.t_end = 0.01;
    c.output.directory = "harness_out/det1";
    run(c);
    c.output.directory = "harness_out/det2";
    run(c);
    CHECK(slurp("harness_out/det1/run.csv") == slurp("harness_out/det2/run.csv"));
}

TEST_CASE("drag-only run decays kinetic energy like exp(-2 r0 t)") {
    RunConfig c;
    c.initial.preset = "shear";
    c.initial.wavenumber = 0;  // spatially constant velocity
    c.initial.amplitude = 0.3;
    c.params.eps = 0.0;
    c.params.kappa_q = 0.0;
    c.params.r0 = 0.5;
    c.dt = 1e-3;
    c.t_end = 1.0;
    c.output.cadence = 100;
    c.output.directory = "harness_out/drag";
    RunResult r = run(c);
    REQUIRE(r.exit_code == 0);
    double E0 = r.records.front().E_kinetic;
    CHECK(E0 == doctest::Approx(0.5 * 0.3 * 0.3 * two_pi).epsilon(1e-10));
    for (const FunctionalRecord& rec : r.records) {
        double ref = E0 * std::exp(-2.0 * c.params.r0 * rec.t);
        CHECK(std::abs(rec.E_kinetic - ref) <= 0.01 * ref);
    }
}

TEST_CASE("dt above the stability bound fails with the offending term named") {
    RunConfig c;
    c.initial.preset = "shear";
    c.initial.amplitude = 0.5;
    c.params.eps = 1e-3;
    c.dt = 0.2;  // far above both bounds at modes = 8
    c.t_end = 0.4;
    c.output.directory = "harness_out/unstable";
    c.output.snapshot_final = false;
    RunResult r = run(c);
    CHECK(r.exit_code != 0);
    CHECK(r.termination.find("stability bound violated") != std::string::npos);
    CHECK(r.termination.find("term") != std::string::npos);
}

TEST_CASE("sweep: machinery, errors, summary table") {
    RunConfig base;
    base.params.r0 = 0.2;
    base.initial.preset = "shear";
    base.initial.wavenumber = 0;
    base.initial.amplitude = 0.3;
    base.params.eps = 0.0;
    base.params.kappa_q = 0.0;
    base.dt = 1e-3;
    base.t_end = 0.01;
    base.output.directory = "harness_out/sweep";
    CHECK_THROWS_AS(sweep(base, "gamma", {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(sweep(base, "r0", {}), std::invalid_argument);

    SweepSummary s = sweep(base, "r0", {0.1, 0.2, 0.4});
    CHECK(s.exit_code == 0);
    REQUIRE(s.entries.size() == 3);
    for (const SweepEntry& e : s.entries) {
        CHECK(e.exit_code == 0);
        CHECK(fs::exists(fs::path(e.directory) / "run.csv"));
    }
    // stronger drag leaves less terminal kinetic energy
    CHECK(s.entries[0].terminal.E_kinetic > s.entries[2].terminal.E_kinetic);
    CHECK(s.table().find("axis: r0") != std::string::npos);
    CHECK(report_directory("harness_out/sweep").find("manifest: verified") != std::string::npos);

    // a failing child is recorded and the sweep continues
    base.dt = 0.5;
    base.t_end = 1.0;
    base.params.eps = 1e-3;
    base.output.directory = "harness_out/sweep_bad";
    SweepSummary bad = sweep(base, "r0", {0.1, 0.2});
    CHECK(bad.exit_code != 0);
    CHECK(bad.entries.size() == 2);
}

TEST_CASE("3D smoke run at 16^3 completes with sane diagnostics") {
    RunConfig c;
    c.dim = 3;
    c.points = 16;
    c.modes = 4;
    c.initial.preset = "density-bump";
    c.initial.amplitude = 0.15;
    c.params.eps = 1e-3;
    c.params.kappa_q = 1e-3;
    c.params.r0 = 0.1;
    c.dt = 2e-4;
    c.t_end = 1e-3;
    c.output.directory = "harness_out/smoke3d";
    RunResult r = run(c);
    CHECK(r.exit_code == 0);
    REQUIRE(!r.records.empty());
    const FunctionalRecord& last = r.records.back();
    CHECK(last.mass == doctest::Approx(two_pi * two_pi * two_pi).epsilon(1e-10));
    CHECK(last.min_rho > 0.0);
    CHECK(last.min_theta > 0.0);
    CHECK(std::isfinite(last.E_total));
    CHECK(std::isfinite(last.bd));
}

TEST_CASE("check suites all pass; unknown suite rejected") {
    for (const std::string& name : check_suites()) {
        CheckReport rep = run_check(name);
        INFO(rep.text());
        CHECK(rep.pass);
        for (const PropertyResult& p : rep.properties) CHECK(p.samples > 0);
    }
    CHECK_THROWS_AS(run_check("nope"), std::invalid_argument);
}
