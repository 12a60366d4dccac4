#include "cutoffs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nsfg {

namespace {

// quintic smoothstep on [0,1]: C^2, S(0)=0, S(1)=1, S'(0)=S'(1)=0, max S'=15/8
double smoothstep5(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep5_prime(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

void require_positive(double x, const char* what) {
    if (!(x > 0.0)) throw std::invalid_argument(std::string("nonpositive ") + what);
}

}  // namespace

double phi_lower(double rho, double m) {
    require_positive(m, "cutoff parameter m");
    double a = 1.0 / (2.0 * m), b = 1.0 / m;
    return smoothstep5((rho - a) / (b - a));
}

double phi_lower_prime(double rho, double m) {
    require_positive(m, "cutoff parameter m");
    double a = 1.0 / (2.0 * m), b = 1.0 / m;
    return smoothstep5_prime((rho - a) / (b - a)) / (b - a);
}

double phi_upper(double rho, double K) {
    require_positive(K, "cutoff parameter K");
    return 1.0 - smoothstep5((rho - K) / K);
}

double phi_upper_prime(double rho, double K) {
    require_positive(K, "cutoff parameter K");
    return -smoothstep5_prime((rho - K) / K) / K;
}

double phi_n_outer_knot(double n) {
    require_positive(n, "cutoff parameter n");
    return std::exp(1.0) * (1.0 + n) * (1.0 + n) - 1.0;
}

namespace {
void check_y(double y) {
    if (y < 0.0) throw std::invalid_argument("phi_tilde_n argument must be >= 0");
}
}  // namespace

double phi_tilde_n(double y, double n) {
    check_y(y);
    double Cn = phi_n_outer_knot(n);
    if (y <= n) return (1.0 + y) * std::log1p(y);
    if (y <= Cn)
        return 2.0 * (1.0 + std::log1p(n)) * y - (1.0 + y) * std::log1p(y) +
               2.0 * (std::log1p(n) - n);
    return std::exp(1.0) * (1.0 + n) * (1.0 + n) - 2.0 * n - 2.0;
}

double phi_tilde_n_prime(double y, double n) {
    check_y(y);
    double Cn = phi_n_outer_knot(n);
    if (y <= n) return 1.0 + std::log1p(y);
    if (y <= Cn) return 2.0 * (1.0 + std::log1p(n)) - (1.0 + std::log1p(y));
    return 0.0;
}

double phi_tilde_n_double(double y, double n) {
    check_y(y);
    double Cn = phi_n_outer_knot(n);
    if (y <= n) return 1.0 / (1.0 + y);
    if (y <= Cn) return -1.0 / (1.0 + y);
    return 0.0;
}

std::array<double, 3> phi_n_prime_vec(const std::array<double, 3>& u, int dim, double n) {
    double y = 0.0;
    for (int d = 0; d < dim; ++d) y += u[d] * u[d];
    double p = phi_tilde_n_prime(y, n);
    std::array<double, 3> g{0.0, 0.0, 0.0};
    for (int d = 0; d < dim; ++d) g[d] = 2.0 * p * u[d];
    return g;
}

std::array<std::array<double, 3>, 3> phi_n_double_mat(const std::array<double, 3>& u, int dim,
                                                      double n) {
    double y = 0.0;
    for (int d = 0; d < dim; ++d) y += u[d] * u[d];
    double p1 = phi_tilde_n_prime(y, n);
    double p2 = phi_tilde_n_double(y, n);
    std::array<std::array<double, 3>, 3> H{};
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            H[i][j] = 2.0 * (2.0 * p2 * u[i] * u[j] + (i == j ? p1 : 0.0));
    return H;
}

VectorField truncated_velocity(const ScalarField& rho, const VectorField& u, double m, double K) {
    if (!(rho.grid == u.grid)) throw std::invalid_argument("truncated_velocity: grid mismatch");
    ScalarField phi = apply(rho, [&](double r) { return phi_lower(r, m) * phi_upper(r, K); });
    return mul(phi, u);
}

}  // namespace nsfg
