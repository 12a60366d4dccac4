// One step of the regularized continuity equation rho_t + div(rho u) = eps * lap(rho):
// dealiased explicit advection split with an exact spectral diffusion factor.
#pragma once

#include "fields.hpp"

namespace nsfg {

struct DensityStepReport {
    ScalarField rho_new;
    double mass_drift = 0.0;  // |mass_new - mass_old| / mass_old
    double min_rho = 0.0;
    double max_rho = 0.0;
    bool bound_check = false;  // two-sided exponential envelope on min/max
};

enum class SplitScheme { lie, strang };

// Advective CFL bound 0.5 h / ||u||_inf (infinity when u == 0).
double advective_dt_limit(const VectorField& u);

// Throws on nonpositive density, min rho < 1e-10 (downstream rho^-10 terms
// overflow), or dt above the advective bound.
DensityStepReport step_density(const ScalarField& rho, const VectorField& u, double eps, double dt,
                               SplitScheme scheme = SplitScheme::lie);

}  // namespace nsfg
