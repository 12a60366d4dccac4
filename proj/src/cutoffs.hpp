// Density cutoffs phi_m (vacuum side), phi_K (large-density side), and the
// truncated log-energy family phi_tilde_n used by the L log L velocity bound.
#pragma once

#include <array>

#include "fields.hpp"

namespace nsfg {

// Lower cutoff: 0 for rho <= 1/(2m), 1 for rho >= 1/m, quintic-smoothstep ramp
// between. The ramp width 1/(2m) forces an average slope of exactly 2m, so no
// C^1 profile can satisfy |phi_m'| <= 2m; the true bounds for this profile are
// |phi_m'| <= (15/8)*2m = 3.75m and |rho phi_m'(rho)| <= 2.86.
double phi_lower(double rho, double m);
double phi_lower_prime(double rho, double m);

// Upper cutoff: 1 for rho <= K, 0 for rho >= 2K; |phi_K'| <= (15/8)/K <= 2/K.
double phi_upper(double rho, double K);
double phi_upper_prime(double rho, double K);

// C_n = e(1+n)^2 - 1, the outer knot of phi_tilde_n.
double phi_n_outer_knot(double n);

// phi_tilde_n and derivatives; y >= 0, n > 0. Throws on negative y.
double phi_tilde_n(double y, double n);
double phi_tilde_n_prime(double y, double n);
double phi_tilde_n_double(double y, double n);

// Gradient and Hessian of u -> phi_tilde_n(|u|^2) for u in R^dim.
// hessian = 2(2 phi_tilde_n''(|u|^2) u (x) u + I phi_tilde_n'(|u|^2)).
std::array<double, 3> phi_n_prime_vec(const std::array<double, 3>& u, int dim, double n);
std::array<std::array<double, 3>, 3> phi_n_double_mat(const std::array<double, 3>& u, int dim,
                                                      double n);

// v = phi_m(rho) phi_K(rho) u, pointwise.
VectorField truncated_velocity(const ScalarField& rho, const VectorField& u, double m, double K);

}  // namespace nsfg
