// Shared simulation state and physical parameters.
#pragma once

#include "basis.hpp"
#include "fields.hpp"
#include "thermal.hpp"

namespace nsfg {

struct Params {
    double eps = 1e-3;     // regularization parameter
    double kappa_q = 1e-3; // quantum/capillary coefficient
    double r0 = 0.0;       // linear drag
    double r1 = 0.0;       // cubic drag
    // per-term overrides, negative = inherit eps
    double eps_bi = -1.0;
    double eps_cold = -1.0;
    double eps_cross = -1.0;
    double eps_hyper = -1.0;
    double eps_mass = -1.0;  // thermal (eps + rho) mass
    double eps_sink = -1.0;  // thermal eps theta^{alpha+1} sink
    HeatLaw law;

    double bi() const { return eps_bi < 0.0 ? eps : eps_bi; }
    double cold() const { return eps_cold < 0.0 ? eps : eps_cold; }
    double cross() const { return eps_cross < 0.0 ? eps : eps_cross; }
    double hyper() const { return eps_hyper < 0.0 ? eps : eps_hyper; }
};

struct SystemState {
    ScalarField rho;
    GalerkinVelocity gv;
    ScalarField theta;
    double t = 0.0;
};

}  // namespace nsfg
