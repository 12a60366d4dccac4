// Thermal energy step and the renormalization primitives Q_h, K, K_h.
#pragma once

#include <functional>
#include <string>

#include "fields.hpp"

namespace nsfg {

// Conductivity kappa(theta) = kappa0 * (1 + theta^alpha). A non-constant
// kappa0(theta) override switches the primitives to adaptive quadrature.
struct HeatLaw {
    double alpha = 2.0;
    double kappa0 = 1.0;  // must lie in [c1, 1/c1]
    std::function<double(double)> kappa0_fn;  // optional kappa0(theta)
    double c1 = 1.0;      // in (0, 1]
};

void validate_heat_law(const HeatLaw& law);   // throws std::invalid_argument
double kappa(const HeatLaw& law, double theta);

struct HFunction {
    std::function<double(double)> h, h_prime, h_double_prime;
    std::string label;
};

HFunction make_h_reciprocal();           // h(z) = 1/(1+z)
HFunction make_h_power(double omega);    // h(z) = (1+z)^{-omega}, omega in (0,1)
HFunction make_h_one();                  // h == 1 (limiting family member)

// h(0)=1, h non-increasing, h'' >= 2(h')^2 on a log-spaced grid of [0, 1e6].
bool h_admissible(const HFunction& h);

// Primitives, pointwise in theta (theta >= 0 required):
//   K   = int_0^theta kappa(z) dz
//   Q_h = int_0^theta h(z) dz
//   K_h = int_0^theta kappa(z) h(z) dz
ScalarField K_of(const ScalarField& theta, const HeatLaw& law);
ScalarField K_inverse(const ScalarField& kvals, const HeatLaw& law);  // Newton, kvals >= 0
ScalarField Q_h(const ScalarField& theta, const HFunction& h);
ScalarField K_h(const ScalarField& theta, const HFunction& h, const HeatLaw& law);

struct ThermalStepReport {
    ScalarField theta_new;
    double min_theta = 0.0;
    double balance_residual = 0.0;  // L2 norm of the discrete equation at theta_new
    double clipped_mass = 0.0;      // integral of the negative part removed
    int iterations = 0;
};

// Semi-implicit step of
//   d/dt((eps_mass + rho) theta) + div(rho theta u) - Lap K(theta)
//     + eps_sink * theta^{alpha+1} = S:grad(u) - rho theta div u,  S = 2 rho D(u).
// Conductivity lagged (kappa(theta_n)), diffusion and sink implicit via a
// constant-coefficient fixed point (tol 1e-13, stagnation below 1e-10
// accepted, <= 200 iterations, throws otherwise). Negative values mean
// "use eps" for the per-term overrides.
ThermalStepReport step_temperature(const ScalarField& theta, const ScalarField& rho,
                                   const VectorField& u, const HeatLaw& law, double eps, double dt,
                                   double eps_mass = -1.0, double eps_sink = -1.0);

// Signed space integral of the time-discrete renormalized balance
//   d/dt((eps+rho) Q_h) + div(rho Q_h u) - Lap K_h + eps theta^{alpha+1} h
//     = h S:grad(u) - kappa h' |grad theta|^2 - h rho theta div u
//       + eps Lap(rho) (Q_h - theta h)
// evaluated at the new state with a finite-difference time derivative.
double renormalized_residual(const ScalarField& theta_old, const ScalarField& theta_new,
                             const ScalarField& rho_old, const ScalarField& rho_new,
                             const VectorField& u, const HFunction& h, const HeatLaw& law,
                             double eps, double dt);

}  // namespace nsfg
