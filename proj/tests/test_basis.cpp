#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "basis.hpp"

using namespace nsfg;

TEST_CASE("T1 N=3 gives {const, cos x, sin x} (normalized)") {
    Grid g = make_grid(1, 32);
    GalerkinBasis b = build_basis(g, 3);
    CHECK(b.modes[0].k[0] == 0);
    CHECK(!b.modes[0].is_sin);
    CHECK(b.modes[1].k[0] == 1);
    CHECK(!b.modes[1].is_sin);
    CHECK(b.modes[2].k[0] == 1);
    CHECK(b.modes[2].is_sin);
    // normalization: const = 1/sqrt(2pi), cos amplitude sqrt(1/pi)
    CHECK(b.fields[0].v[0] == doctest::Approx(1.0 / std::sqrt(two_pi)).epsilon(1e-12));
    CHECK(max_abs(b.fields[1]) == doctest::Approx(std::sqrt(2.0 / two_pi)).epsilon(1e-6));
}

TEST_CASE("oversized basis request errors") {
    Grid g = make_grid(1, 16);  // cut = 5 -> 11 scalar modes available
    CHECK_NOTHROW(build_basis(g, 11));
    CHECK_THROWS(build_basis(g, 12));
}

TEST_CASE("Gram matrix is the identity") {
    for (int dim : {1, 2}) {
        Grid g = make_grid(dim, 16);
        GalerkinBasis b = build_basis(g, dim == 1 ? 7 : 12);
        for (int i = 0; i < b.N; ++i)
            for (int j = 0; j < b.N; ++j) {
                double gij = integrate(mul(b.fields[i], b.fields[j]));
                CHECK(std::abs(gij - (i == j ? 1.0 : 0.0)) <= 1e-12);
            }
    }
}

TEST_CASE("project picks out a basis element") {
    Grid g = make_grid(1, 32);
    GalerkinBasis b = build_basis(g, 5);
    VectorField v = make_vector(g);
    v.comp[0] = b.fields[2];
    GalerkinVelocity gv = project(v, b);
    for (int j = 0; j < b.N; ++j)
        CHECK(std::abs(gv.lambda[j] - (j == 2 ? 1.0 : 0.0)) <= 1e-12);
}

TEST_CASE("projection of an orthogonal high mode is zero") {
    Grid g = make_grid(1, 32);
    GalerkinBasis b = build_basis(g, 5);  // modes up to k=2
    VectorField v = make_vector(g);
    v.comp[0] = sample(g, [](const std::array<double, 3>& x) { return std::sin(7 * x[0]); });
    GalerkinVelocity gv = project(v, b);
    for (double l : gv.lambda) CHECK(std::abs(l) <= 1e-12);
}

TEST_CASE("projection is the L2-optimal approximation") {
    Grid g = make_grid(1, 64);
    GalerkinBasis b = build_basis(g, 7);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    VectorField v = make_vector(g);
    for (int k = 1; k <= 9; ++k) {
        double a = coef(rng), c = coef(rng);
        ScalarField m = sample(g, [&](const std::array<double, 3>& x) {
            return a * std::sin(k * x[0]) + c * std::cos(k * x[0]);
        });
        v.comp[0] = add(v.comp[0], m);
    }
    GalerkinVelocity gv = project(v, b);
    VectorField vr = reconstruct(gv);
    ScalarField resid = sub(v.comp[0], vr.comp[0]);
    // optimality: residual orthogonal to every basis element
    for (int j = 0; j < b.N; ++j)
        CHECK(std::abs(mode_inner(resid, b, j)) <= 1e-12);
    // least-squares oracle: perturbing any coefficient increases the L2 error
    double base = integrate(mul(resid, resid));
    for (int j : {0, 3, 6}) {
        GalerkinVelocity gp = gv;
        gp.lambda[j] += 0.05;
        ScalarField r2 = sub(v.comp[0], reconstruct(gp).comp[0]);
        CHECK(integrate(mul(r2, r2)) > base);
    }
}

TEST_CASE("reconstruct: zero and delta coefficients") {
    Grid g = make_grid(2, 16);
    GalerkinBasis b = build_basis(g, 6);
    GalerkinVelocity gv = zero_velocity(b);
    VectorField z = reconstruct(gv);
    CHECK(max_abs(z.comp[0]) == 0.0);
    CHECK(max_abs(z.comp[1]) == 0.0);
    gv.lambda[b.N + 4] = 1.0;  // component 1, mode 4
    VectorField e = reconstruct(gv);
    ScalarField diff = sub(e.comp[1], b.fields[4]);
    CHECK(max_abs(diff) <= 1e-13);
    CHECK(max_abs(e.comp[0]) == 0.0);
}

TEST_CASE("project then reconstruct round-trips on X_N") {
    Grid g = make_grid(2, 16);
    GalerkinBasis b = build_basis(g, 9);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    GalerkinVelocity gv = zero_velocity(b);
    for (double& l : gv.lambda) l = coef(rng);
    GalerkinVelocity back = project(reconstruct(gv), b);
    for (std::size_t i = 0; i < gv.lambda.size(); ++i)
        CHECK(std::abs(back.lambda[i] - gv.lambda[i]) <= 1e-12);
}

TEST_CASE("norm equivalence constant bounds the sup norm") {
    Grid g = make_grid(1, 32);
    GalerkinBasis b = build_basis(g, 7);
    double C = norm_equivalence_constant(b);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        GalerkinVelocity gv = zero_velocity(b);
        double l2 = 0.0;
        for (double& l : gv.lambda) {
            l = coef(rng);
            l2 += l * l;
        }
        l2 = std::sqrt(l2);
        VectorField u = reconstruct(gv);
        CHECK(max_abs(u.comp[0]) <= C * l2 + 1e-12);
    }
}

TEST_CASE("projection is an L2 contraction") {
    Grid g = make_grid(1, 64);
    GalerkinBasis b = build_basis(g, 7);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        VectorField v = make_vector(g);
        for (int k = 1; k <= 10; ++k) {
            double a = coef(rng);
            ScalarField m = sample(g, [&](const std::array<double, 3>& x) {
                return a * std::cos(k * x[0] + 0.3 * k);
            });
            v.comp[0] = add(v.comp[0], m);
        }
        VectorField pv = reconstruct(project(v, b));
        double n_in = std::sqrt(integrate(mul(v.comp[0], v.comp[0])));
        double n_out = std::sqrt(integrate(mul(pv.comp[0], pv.comp[0])));
        CHECK(n_out <= n_in + 1e-12);
    }
}
