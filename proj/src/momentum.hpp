// Galerkin momentum system: weighted mass operator, weak-form force assembly
// (term by term), and the velocity coefficient step.
#pragma once

#include <vector>

#include "basis.hpp"
#include "state.hpp"

namespace nsfg {

// M[rho] with entries int rho e_i . e_j. The vector basis elements live in a
// single component each, so M is block diagonal with identical N x N blocks.
struct MassOperator {
    const GalerkinBasis* basis = nullptr;
    std::vector<double> block;       // row-major N x N symmetric block
    std::vector<double> chol;        // Cholesky factor of the block
    double inverse_norm = 0.0;       // ||M^-1|| = 1 / lambda_min(block)

    // Solve M x = rhs over all N * dim coefficients.
    std::vector<double> solve(const std::vector<double>& rhs) const;
    // y = M_dot-style product with a given block is handled by mass_apply below.
};

// Throws if the Cholesky factorization fails (density too close to zero).
MassOperator assemble_mass(const ScalarField& rho, const GalerkinBasis& b);

// Block with entries int w e_i e_j for an arbitrary weight (used for M_dot).
std::vector<double> weighted_block(const ScalarField& w, const GalerkinBasis& b);
// Apply the block-diagonal operator with the given N x N block to lambda.
std::vector<double> block_apply(const std::vector<double>& block, const GalerkinBasis& b,
                                const std::vector<double>& lambda);

struct ForceBreakdown {
    std::vector<double> convection, viscous, pressure, biharmonic, cold_pressure, cross, hyper,
        drag0, drag1, capillary;
    std::vector<double> total;  // exact sum of the parts
};

ForceBreakdown assemble_forces(const SystemState& state, const Params& p);

enum class VelocityScheme { rk2, picard };

// Advance lambda one step of d/dt(M[rho] lambda) = F, i.e.
// lambda_dot = M^-1 (F - M_dot lambda) with M_dot built from
// rho_t = -div(rho u) + eps Lap rho. rho and theta are held fixed.
GalerkinVelocity step_velocity(const SystemState& state, const Params& p, double dt,
                               VelocityScheme scheme = VelocityScheme::rk2);

// Signed residual of the discrete kinetic energy identity
//   d/dt (1/2 int rho |u|^2) = <F, lambda> - 1/2 int rho_t |u|^2
// with a finite-difference left side between two consecutive states.
double kinetic_energy_balance(const SystemState& before, const SystemState& after,
                              const Params& p, double dt);

// Explicit stability bound: advective CFL combined with the inverse of the
// stiffest frequency over the basis modes (viscous |k|^2, biharmonic
// eps |k|^4, cross, drag, and the sqrt(eps_h |k|^20) oscillation of the
// high-order density coupling).
double stable_dt(const SystemState& state, const Params& p);

}  // namespace nsfg
