#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "transport.hpp"

using namespace nsfg;

namespace {

ScalarField random_density(const Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(-0.05, 0.05);
    std::vector<double> a(5), b(5);
    for (auto& x : a) x = amp(rng);
    for (auto& x : b) x = amp(rng);
    return sample(g, [&](const std::array<double, 3>& x) {
        double s = 1.0;
        for (int k = 1; k <= 5; ++k)
            s += a[k - 1] * std::sin(k * x[0]) + b[k - 1] * std::cos(k * x[0] + 0.2 * x[1 % 3]);
        return s;
    });
}

VectorField random_velocity(const Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> amp(-0.3, 0.3);
    VectorField u = make_vector(g);
    for (int d = 0; d < g.dim; ++d) {
        double a = amp(rng), b = amp(rng);
        u.comp[d] = sample(g, [&](const std::array<double, 3>& x) {
            return a * std::sin(2 * x[d]) + b * std::cos(x[(d + 1) % 3 < g.dim ? (d + 1) % g.dim : 0]);
        });
    }
    return u;
}

}  // namespace

TEST_CASE("u = 0: diffusion substep is the exact heat semigroup") {
    Grid g = make_grid(1, 64);
    double eps = 0.01, dt = 0.05;
    ScalarField rho = sample(g, [](const std::array<double, 3>& x) {
        return 1.0 + 0.1 * std::sin(x[0]);
    });
    VectorField u = make_vector(g);
    for (SplitScheme s : {SplitScheme::lie, SplitScheme::strang}) {
        DensityStepReport rep = step_density(rho, u, eps, dt, s);
        ScalarField exact = sample(g, [&](const std::array<double, 3>& x) {
            return 1.0 + 0.1 * std::exp(-eps * dt) * std::sin(x[0]);
        });
        CHECK(max_abs(sub(rep.rho_new, exact)) <= 1e-13);
        CHECK(rep.mass_drift <= 1e-14);
        CHECK(rep.bound_check);
    }
}

TEST_CASE("u = 0, eps = 0: identity step") {
    Grid g = make_grid(2, 16);
    ScalarField rho = random_density(g, 7);
    DensityStepReport rep = step_density(rho, make_vector(g), 0.0, 0.1);
    CHECK(max_abs(sub(rep.rho_new, rho)) <= 1e-14);
}

TEST_CASE("rho = 1, u = sin x, eps = 0: one Euler step is 1 - dt cos x") {
    Grid g = make_grid(1, 64);
    ScalarField rho = make_scalar(g, 1.0);
    VectorField u = make_vector(g);
    u.comp[0] = sample(g, [](const std::array<double, 3>& x) { return std::sin(x[0]); });
    double dt = 0.01;
    DensityStepReport rep = step_density(rho, u, 0.0, dt);
    ScalarField expect = sample(g, [&](const std::array<double, 3>& x) {
        return 1.0 - dt * std::cos(x[0]);
    });
    CHECK(max_abs(sub(rep.rho_new, expect)) <= 1e-13);
}

TEST_CASE("convergence orders against a fine-step reference") {
    Grid g = make_grid(1, 64);
    ScalarField rho0 = sample(g, [](const std::array<double, 3>& x) {
        return 1.0 + 0.2 * std::sin(x[0]);
    });
    VectorField u = make_vector(g);
    u.comp[0] = sample(g, [](const std::array<double, 3>& x) { return 0.3 * std::sin(x[0]); });
    double eps = 0.01, T = 0.2;

    auto run = [&](SplitScheme s, int steps) {
        ScalarField r = rho0;
        double dt = T / steps;
        for (int i = 0; i < steps; ++i) r = step_density(r, u, eps, dt, s).rho_new;
        return r;
    };
    ScalarField ref = run(SplitScheme::strang, 4096);

    double e_lie_1 = max_abs(sub(run(SplitScheme::lie, 16), ref));
    double e_lie_2 = max_abs(sub(run(SplitScheme::lie, 32), ref));
    CHECK(e_lie_1 / e_lie_2 > 1.7);  // first order
    CHECK(e_lie_1 / e_lie_2 < 2.5);

    double e_str_1 = max_abs(sub(run(SplitScheme::strang, 16), ref));
    double e_str_2 = max_abs(sub(run(SplitScheme::strang, 32), ref));
    CHECK(e_str_1 / e_str_2 > 3.4);  // second order
    CHECK(e_str_1 < e_lie_1);
}

TEST_CASE("mass conserved to 1e-12 relative every step (random inputs)") {
    for (int dim : {1, 2}) {
        Grid g = make_grid(dim, dim == 1 ? 64 : 32);
        for (unsigned seed : {1u, 2u, 3u}) {
            ScalarField rho = random_density(g, seed);
            VectorField u = random_velocity(g, seed + 100);
            double dt = 0.5 * advective_dt_limit(u);
            for (int step = 0; step < 20; ++step) {
                DensityStepReport rep = step_density(rho, u, 0.01, dt,
                                                     step % 2 ? SplitScheme::strang
                                                              : SplitScheme::lie);
                CHECK(rep.mass_drift <= 1e-12);
                rho = rep.rho_new;
            }
        }
    }
}

TEST_CASE("constants survive a divergence-free flow") {
    Grid g = make_grid(2, 32);
    // u = rot(psi), psi = sin x sin y -> div u = 0 to round-off
    VectorField u = make_vector(g);
    u.comp[0] = sample(g, [](const std::array<double, 3>& x) {
        return std::sin(x[0]) * std::cos(x[1]);
    });
    u.comp[1] = sample(g, [](const std::array<double, 3>& x) {
        return -std::cos(x[0]) * std::sin(x[1]);
    });
    CHECK(max_abs(divergence(u)) <= 1e-13);
    ScalarField rho = make_scalar(g, 2.5);
    DensityStepReport rep = step_density(rho, u, 0.05, 0.5 * advective_dt_limit(u));
    CHECK(max_abs(sub(rep.rho_new, rho)) <= 1e-12);
    CHECK(rep.bound_check);
}

TEST_CASE("positivity under the exponential envelope (property)") {
    Grid g = make_grid(1, 64);
    for (unsigned seed = 0; seed < 30; ++seed) {
        ScalarField rho = random_density(g, seed);
        VectorField u = random_velocity(g, seed + 500);
        double dt = std::min(0.25 * advective_dt_limit(u), 0.02);
        DensityStepReport rep = step_density(rho, u, 0.01, dt);
        CHECK(rep.min_rho > 0.0);
        CHECK(rep.bound_check);
    }
}

TEST_CASE("error paths") {
    Grid g = make_grid(1, 32);
    VectorField u = make_vector(g);
    u.comp[0] = sample(g, [](const std::array<double, 3>& x) { return std::sin(x[0]); });

    ScalarField neg = sample(g, [](const std::array<double, 3>& x) { return std::sin(x[0]); });
    CHECK_THROWS(step_density(neg, u, 0.01, 1e-3));

    ScalarField tiny = make_scalar(g, 1e-12);  // below the degeneracy floor
    CHECK_THROWS(step_density(tiny, u, 0.01, 1e-3));

    ScalarField ok = make_scalar(g, 1.0);
    double lim = advective_dt_limit(u);
    CHECK_THROWS(step_density(ok, u, 0.01, 1.01 * lim));
    CHECK_NOTHROW(step_density(ok, u, 0.01, 0.99 * lim));

    CHECK_THROWS(step_density(ok, u, -0.01, 1e-3));
    CHECK_THROWS(step_density(ok, u, 0.01, 0.0));
}

TEST_CASE("long run: 300 steps keep mass to 1e-12 and density positive") {
    Grid g = make_grid(1, 64);
    ScalarField rho = sample(g, [](const std::array<double, 3>& x) {
        return 1.0 + 0.4 * std::sin(x[0]) + 0.1 * std::cos(3 * x[0]);
    });
    VectorField u = make_vector(g);
    u.comp[0] = sample(g, [](const std::array<double, 3>& x) {
        return 0.1 * std::sin(x[0]) + 0.05 * std::cos(2 * x[0]);
    });
    double mass0 = integrate(rho);
    double dt = std::min(0.5 * advective_dt_limit(u), 0.02);
    for (int i = 0; i < 300; ++i) {
        DensityStepReport rep = step_density(rho, u, 0.05, dt);
        CHECK(rep.min_rho > 0.0);
        rho = rep.rho_new;
    }
    CHECK(std::abs(integrate(rho) - mass0) / mass0 <= 1e-12);
}
