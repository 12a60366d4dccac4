// Functionals and inequality monitors evaluated on discrete states: total
// energy and its budget, BD entropy identity, log-density inequalities, the
// truncated log-energy functional and its time-integrated bound, plus
// conservation/positivity reporting.
#pragma once

#include <array>
#include <functional>
#include <vector>

#include "momentum.hpp"
#include "state.hpp"

namespace nsfg {

struct EnergyBreakdown {
    double kinetic = 0.0;    // 1/2 int rho |u|^2
    double cold = 0.0;       // eps/10 int rho^-10
    double capillary = 0.0;  // kappa/2 int |grad sqrt(rho)|^2
    double hyper = 0.0;      // eps/2 int |grad Lap^4 rho|^2
    double internal = 0.0;   // int (eps + rho) theta
    double total = 0.0;      // exact sum of the parts
};

EnergyBreakdown energy(const SystemState& state, const Params& p);

// Named dissipation integrals of the total energy balance, reported for
// monitoring (instantaneous values at one state).
struct EnergyDissipation {
    double visc_lap = 0.0;    // eps int |Lap u|^2
    double visc_strain = 0.0; // 2 int rho |D(u)|^2
    double hyper = 0.0;       // eps^2 int |Lap^5 rho|^2
    double cold = 0.0;        // eps^2 int |grad rho^-5|^2
    double drag0 = 0.0;       // r0 int |u|^2
    double drag1 = 0.0;       // r1 int rho |u|^4
    double log_hessian = 0.0; // kappa eps int rho |Hess log rho|^2
    double sink = 0.0;        // eps int theta^{alpha+1}
};

EnergyDissipation energy_dissipation(const SystemState& state, const Params& p);

// Finite-difference dE/dt between consecutive states minus the exact
// instantaneous rate of the discrete dynamics; signed, order >= 1 in dt.
double energy_dissipation_residual(const SystemState& before, const SystemState& after,
                                   const Params& p, double dt);

struct JungelCheck {
    double lhs = 0.0;   // int rho |Hess log rho|^2
    double rhs1 = 0.0;  // (1/7) int |Hess sqrt(rho)|^2
    double rhs2 = 0.0;  // (1/8) int |grad rho^{1/4}|^4
    bool pass = false;
};

JungelCheck jungel_check(const ScalarField& rho);

// Instantaneous BD entropy functional:
//   int 1/2 rho |u + grad rho / rho|^2 + eps/10 rho^-10
//     + kappa/2 |grad sqrt rho|^2 + eps/2 |grad Lap^4 rho|^2 - r0 log rho.
double bd_entropy(const SystemState& state, const Params& p);

struct BDReport {
    double fd_dt = 0.0;       // finite-difference d/dt of the BD functional
    double exact_rate = 0.0;  // chain-rule rate under the discrete dynamics
    double residual = 0.0;    // fd_dt - exact_rate
    std::array<double, 6> dissipation{};  // the six left-side integrals
    std::array<double, 8> r_terms{};      // R1..R8
    double identity_gap = 0.0;  // fd_dt + sum(dissipation) - sum(r_terms)
    bool r7_bound_ok = false;   // |R7| <= eps int rho |div u|^2 + (1/(4 eps)) int rho theta^2
};

// Throws on eps = 0 (the identity needs the regularized continuity equation).
BDReport bd_identity(const SystemState& before, const SystemState& after, const Params& p,
                     double dt);
double bd_identity_residual(const SystemState& before, const SystemState& after, const Params& p,
                            double dt);

// int rho phi_tilde_n(|v|^2) with v = phi_m(rho) phi_K(rho) u, or v = u.
double mv_functional(const SystemState& state, double n, double m, double K);
double mv_functional_untruncated(const SystemState& state, double n);

struct MVCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

// Time-integrated truncated-energy bound over a run sampled at spacing dt:
//   -int_0^T psi' int rho phi_n(u) dx dt
//     <= 8||psi||_inf ( int(rho0|u0|^2 + rho0^2 + |grad sqrt rho0|^2
//                           - r0 min(log rho0, 0)) dx + 2 E0 )
//        + psi(0) int rho0 phi_n(u0) dx
//        + ||psi||_inf int_0^T ( int (rho theta^2)^{2/(2-delta)} dx )^{(2-delta)/2}
//                             ( int (1 + phi_n'(|u|^2))^{2/delta} dx )^{delta/2} dt.
// psi must be >= 0 with psi' <= 0 on [0, T]; throws otherwise.
MVCheck mv_inequality_check(const std::vector<SystemState>& states, double dt, double n,
                            const Params& p, const std::function<double(double)>& psi,
                            const std::function<double(double)>& psi_prime, double delta = 0.5);

struct ConservationReport {
    double mass = 0.0;
    double min_rho = 0.0;
    double min_theta = 0.0;
};

ConservationReport positivity_and_mass(const SystemState& state);

// One CSV row of run diagnostics.
struct FunctionalRecord {
    double t = 0.0, mass = 0.0;
    double E_total = 0.0, E_kinetic = 0.0, E_cold = 0.0, E_capillary = 0.0, E_hyper = 0.0,
           E_internal = 0.0;
    double bd = 0.0, mv_n = 0.0, min_rho = 0.0, min_theta = 0.0;
    double res_energy = 0.0, res_bd = 0.0, res_thermal = 0.0;
};

}  // namespace nsfg
