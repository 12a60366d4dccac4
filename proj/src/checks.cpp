#include "checks.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "cutoffs.hpp"
#include "diagnostics.hpp"
#include "momentum.hpp"
#include "sim.hpp"
#include "thermal.hpp"
#include "transport.hpp"

namespace nsfg {

namespace {

// Random 1D trig polynomial with min value >= 0.15.
ScalarField random_density(const Grid& g, std::mt19937& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double c[6];
    for (double& x : c) x = coef(rng);
    ScalarField f = sample(g, [&](const std::array<double, 3>& x) {
        double s = 0.0;
        for (int j = 1; j <= 3; ++j)
            s += c[2 * j - 2] * std::cos(j * x[0]) + c[2 * j - 1] * std::sin(j * x[0]);
        return s;
    });
    double m = max_abs(f);
    return shift(scale(f, m > 0.0 ? 0.85 / m : 0.0), 1.0);
}

CheckReport check_jungel() {
    CheckReport rep{"jungel"};
    Grid g = make_grid(1, 64);
    std::mt19937 rng(7);
    PropertyResult hess{"hessian_lower_bound", 100, 1e300, false};
    PropertyResult quart{"quartic_root_lower_bound", 100, 1e300, false};
    for (int i = 0; i < 100; ++i) {
        JungelCheck jc = jungel_check(random_density(g, rng));
        double scale1 = std::max(jc.rhs1, 1e-300);
        double scale2 = std::max(jc.rhs2, 1e-300);
        hess.worst_margin = std::min(hess.worst_margin, (jc.lhs - jc.rhs1) / scale1);
        quart.worst_margin = std::min(quart.worst_margin, (jc.lhs - jc.rhs2) / scale2);
    }
    hess.pass = hess.worst_margin >= -1e-12;
    quart.pass = quart.worst_margin >= -1e-12;
    rep.properties = {hess, quart};
    return rep;
}

CheckReport check_cutoffs() {
    CheckReport rep{"cutoffs"};
    const double ns[4] = {0.5, 1.0, 5.0, 20.0};

    PropertyResult knots{"knot_continuity", 0, 1e300, false};
    for (double n : ns) {
        for (double knot : {n, phi_n_outer_knot(n)}) {
            double lo = std::nextafter(knot, 0.0), hi = std::nextafter(knot, 1e308);
            double fscale = std::max(1.0, std::abs(phi_tilde_n(knot, n)));
            double vgap = std::abs(phi_tilde_n(hi, n) - phi_tilde_n(lo, n)) / fscale;
            double dscale = std::max(1.0, std::abs(phi_tilde_n_prime(knot, n)));
            double dgap = std::abs(phi_tilde_n_prime(hi, n) - phi_tilde_n_prime(lo, n)) / dscale;
            knots.worst_margin = std::min(knots.worst_margin,
                                          std::min(1e-12 - vgap, 1e-12 - dgap));
            knots.samples += 2;
        }
    }
    knots.pass = knots.worst_margin >= 0.0;

    PropertyResult bounds{"derivative_bounds", 0, 1e300, false};
    PropertyResult exact{"exact_below_n", 0, 1e300, false};
    for (double n : ns) {
        double cn = phi_n_outer_knot(n);
        for (int i = 0; i < 10000; ++i) {
            double y = 2.0 * cn * i / 9999.0;
            double d = phi_tilde_n_prime(y, n);
            double lower = d;                              // needs d >= 0
            double upper = 1.0 + std::log1p(y) - d;        // needs d <= 1 + ln(1+y)
            bounds.worst_margin = std::min({bounds.worst_margin, lower, upper});
            ++bounds.samples;
            if (y <= n) {
                double ref = (1.0 + y) * std::log1p(y);
                exact.worst_margin = std::min(
                    exact.worst_margin,
                    1e-12 - std::abs(phi_tilde_n(y, n) - ref) / std::max(1.0, ref));
                ++exact.samples;
            }
        }
    }
    bounds.pass = bounds.worst_margin >= -1e-12;
    exact.pass = exact.worst_margin >= 0.0;
    rep.properties = {knots, bounds, exact};
    return rep;
}

CheckReport check_mass_op() {
    CheckReport rep{"mass-op"};
    Grid g = make_grid(1, 64);
    GalerkinBasis b = build_basis(g, 8);
    std::mt19937 rng(11);
    PropertyResult inv{"inverse_norm_bound", 100, 1e300, false};
    for (int i = 0; i < 100; ++i) {
        ScalarField rho = random_density(g, rng);
        MassOperator M = assemble_mass(rho, b);
        double bound = (1.0 + 1e-8) / min_value(rho);
        inv.worst_margin = std::min(inv.worst_margin, (bound - M.inverse_norm) / bound);
    }
    inv.pass = inv.worst_margin >= 0.0;

    PropertyResult cid{"constant_density_diagonal", 1, 1e300, false};
    MassOperator M = assemble_mass(make_scalar(g, 2.5), b);
    double worst = 0.0;
    for (int i = 0; i < b.N; ++i)
        for (int j = 0; j < b.N; ++j)
            worst = std::max(worst, std::abs(M.block[i * b.N + j] - (i == j ? 2.5 : 0.0)));
    cid.worst_margin = 1e-12 - worst;
    cid.pass = cid.worst_margin >= 0.0;
    rep.properties = {inv, cid};
    return rep;
}

CheckReport check_thermal_odes() {
    CheckReport rep{"thermal-odes"};
    Grid g = make_grid(1, 16);
    double eps = 0.1, theta0 = 2.0;
    HeatLaw law;
    ScalarField rho = make_scalar(g, 1.0);
    auto rhs = [&](double t) { return -eps * std::pow(t, law.alpha + 1.0) / (eps + 1.0); };
    auto reference = [&](double T) {
        double t = theta0, dtau = T / 20000;
        for (int i = 0; i < 20000; ++i) {
            double k1 = rhs(t), k2 = rhs(t + 0.5 * dtau * k1), k3 = rhs(t + 0.5 * dtau * k2),
                   k4 = rhs(t + dtau * k3);
            t += dtau / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        }
        return t;
    };
    auto one_step_err = [&](double dt) {
        ScalarField th = make_scalar(g, theta0);
        ThermalStepReport r = step_temperature(th, rho, make_vector(g), law, eps, dt);
        return std::abs(mean(r.theta_new) - reference(dt));
    };
    PropertyResult ord{"uniform_sink_local_second_order", 2, 1e300, false};
    double e1 = one_step_err(0.02), e2 = one_step_err(0.01), e4 = one_step_err(0.005);
    ord.worst_margin = std::min(e1 / e2 - 3.4, e2 / e4 - 3.4);
    ord.pass = ord.worst_margin >= 0.0;
    rep.properties = {ord};
    return rep;
}

CheckReport check_energy_balance() {
    CheckReport rep{"energy-balance"};
    RunConfig c;
    c.points = 64;
    c.modes = 8;
    c.params.eps = 1e-3;
    c.params.kappa_q = 1e-3;
    c.params.r0 = 0.1;
    c.params.r1 = 0.1;
    c.initial.preset = "density-bump";
    c.initial.amplitude = 0.2;
    auto basis = std::make_shared<GalerkinBasis>(build_basis(make_grid(1, c.points), c.modes));
    SystemState s0 = make_initial_state(c, basis);

    std::vector<double> dts = {2e-4, 1e-4, 5e-5}, errs;
    for (double dt : dts) {
        VectorField u = reconstruct(s0.gv);
        SystemState s1 = s0;
        s1.gv = step_velocity(s0, c.params, dt);
        s1.rho = step_density(s0.rho, u, c.params.eps, dt).rho_new;
        s1.theta = step_temperature(s0.theta, s0.rho, u, c.params.law, c.params.eps, dt).theta_new;
        s1.t = dt;
        errs.push_back(std::abs(energy_dissipation_residual(s0, s1, c.params, dt)));
    }
    PropertyResult ord{"residual_refinement_order", 3, 0.0, false};
    double slope = fit_loglog_slope(dts, errs);
    // first-order target with a 2% order-measurement tolerance: sub-leading
    // curvature biases the 3-point fit of an exactly first-order residual
    ord.worst_margin = slope - 0.98;
    ord.pass = ord.worst_margin >= 0.0;
    rep.properties = {ord};
    return rep;
}

}  // namespace

std::string CheckReport::text() const {
    std::string out = "suite " + suite + (pass ? " PASS" : " FAIL") + "\n";
    char buf[160];
    for (const PropertyResult& p : properties) {
        std::snprintf(buf, sizeof(buf), "%s samples=%d worst_margin=%.3e %s\n", p.name.c_str(),
                      p.samples, p.worst_margin, p.pass ? "pass" : "FAIL");
        out += buf;
    }
    return out;
}

std::vector<std::string> check_suites() {
    return {"jungel", "cutoffs", "mass-op", "thermal-odes", "energy-balance"};
}

CheckReport run_check(const std::string& suite) {
    CheckReport rep;
    if (suite == "jungel") rep = check_jungel();
    else if (suite == "cutoffs") rep = check_cutoffs();
    else if (suite == "mass-op") rep = check_mass_op();
    else if (suite == "thermal-odes") rep = check_thermal_odes();
    else if (suite == "energy-balance") rep = check_energy_balance();
    else throw std::invalid_argument("unknown check suite: " + suite);
    rep.pass = !rep.properties.empty();
    for (const PropertyResult& p : rep.properties) rep.pass = rep.pass && p.pass;
    return rep;
}

}  // namespace nsfg
