#include "transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nsfg {

namespace {

// rhs of the advection part: -div(dealias(rho * u))
ScalarField advection_rhs(const ScalarField& rho, const VectorField& u) {
    return scale(divergence(dealias(mul(rho, u))), -1.0);
}

// explicit midpoint step for the advection part
ScalarField advect(const ScalarField& rho, const VectorField& u, double dt, bool second_order) {
    ScalarField k1 = advection_rhs(rho, u);
    if (!second_order) return add(rho, scale(k1, dt));
    ScalarField mid = add(rho, scale(k1, 0.5 * dt));
    return add(rho, scale(advection_rhs(mid, u), dt));
}

}  // namespace

double advective_dt_limit(const VectorField& u) {
    double umax = 0.0;
    for (int d = 0; d < u.grid.dim; ++d) umax = std::max(umax, max_abs(u.comp[d]));
    if (umax == 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 * u.grid.h() / umax;
}

DensityStepReport step_density(const ScalarField& rho, const VectorField& u, double eps, double dt,
                               SplitScheme scheme) {
    if (!(rho.grid == u.grid)) throw std::invalid_argument("step_density: grid mismatch");
    if (!(dt > 0.0) || !(eps >= 0.0)) throw std::invalid_argument("step_density: bad dt or eps");
    check_finite(rho, "density");
    check_finite(u, "velocity");
    double rmin = min_value(rho);
    if (rmin < 1e-10)
        throw std::domain_error("step_density: density below 1e-10 floor");
    double dt_max = advective_dt_limit(u);
    if (dt > dt_max) throw std::domain_error("step_density: dt above advective stability bound");

    double mass0 = integrate(rho);
    DensityStepReport rep;
    if (scheme == SplitScheme::lie) {
        rep.rho_new = diffusion_exp(advect(rho, u, dt, false), eps, dt);
    } else {
        ScalarField half = diffusion_exp(rho, eps, 0.5 * dt);
        rep.rho_new = diffusion_exp(advect(half, u, dt, true), eps, 0.5 * dt);
    }
    check_finite(rep.rho_new, "stepped density");

    rep.mass_drift = std::abs(integrate(rep.rho_new) - mass0) / mass0;
    rep.min_rho = min_value(rep.rho_new);
    rep.max_rho = max_value(rep.rho_new);

    // exponential envelope of the continuity equation, widened by the O(dt^2)
    // defect of the explicit advection substep
    double divmax = max_abs(divergence(u));
    double x = dt * divmax;
    double tol = 1e-6 + x * x;
    bool lower = rep.min_rho >= rmin * std::exp(-x) * (1.0 - tol);
    bool upper = rep.max_rho <= max_value(rho) * std::exp(x) * (1.0 + tol);
    rep.bound_check = lower && upper && rep.min_rho > 0.0;
    return rep;
}

}  // namespace nsfg
