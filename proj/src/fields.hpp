// Scalar/vector fields on the d-dimensional torus with spectral calculus.
// Fields are plain values; every operation returns a new field.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace nsfg {

inline constexpr double two_pi = 6.283185307179586476925286766559;

struct Grid {
    int dim = 1;          // 1, 2 or 3
    int n = 8;            // points per axis, even, >= 8
    double length = two_pi;

    std::size_t size() const;
    double h() const { return length / n; }
    double volume() const;
    bool operator==(const Grid&) const = default;
};

// Throws std::invalid_argument on bad dim / odd n / nonpositive length.
Grid make_grid(int dim, int n, double length = two_pi);

struct ScalarField {
    Grid grid;
    std::vector<double> v;
};

struct VectorField {
    Grid grid;
    std::array<ScalarField, 3> comp;  // entries [0, grid.dim) used
};

ScalarField make_scalar(const Grid& g, double fill = 0.0);
VectorField make_vector(const Grid& g);

// Sample f(x) at grid points; x has grid.dim valid entries.
ScalarField sample(const Grid& g, const std::function<double(const std::array<double, 3>&)>& f);

// ---- algebra (all pointwise) ----
ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField sub(const ScalarField& a, const ScalarField& b);
ScalarField mul(const ScalarField& a, const ScalarField& b);
ScalarField scale(const ScalarField& a, double s);
ScalarField shift(const ScalarField& a, double s);  // a + s
ScalarField apply(const ScalarField& a, const std::function<double(double)>& f);
VectorField add(const VectorField& a, const VectorField& b);
VectorField scale(const VectorField& a, double s);
VectorField mul(const ScalarField& s, const VectorField& a);
ScalarField dot(const VectorField& a, const VectorField& b);

// ---- spectral calculus ----
// d^order/dx_axis^order via (ik)^order multiplier; Nyquist zeroed on odd orders.
ScalarField derivative(const ScalarField& f, int axis, int order);
// Laplacian^p via (-|k|^2)^p, 1 <= p <= 9.
ScalarField laplacian_power(const ScalarField& f, int p);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& u);

// Symmetric strain D(u) = (grad u + grad u^T)/2, full dim x dim storage.
struct TensorField {
    Grid grid;
    std::array<std::array<ScalarField, 3>, 3> t;
};
TensorField strain(const VectorField& u);
TensorField grad_tensor(const VectorField& u);     // t[i][j] = d_j u_i
ScalarField tensor_norm2(const TensorField& T);    // sum_ij t_ij^2
ScalarField contract(const TensorField& A, const TensorField& B);  // sum_ij A_ij B_ij

// Zero every mode with |k_axis| > n/3 on any axis (2/3-rule).
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& u);

// (a - b*Laplacian)^-1 f, a > 0, b >= 0.
ScalarField helmholtz_solve(const ScalarField& f, double a, double b);
// Exact diffusion semigroup: multiply mode k by exp(-c |k|^2 dt).
ScalarField diffusion_exp(const ScalarField& f, double c, double dt);

// ---- quadrature / norms ----
double integrate(const ScalarField& f);   // mean * volume (exact for band-limited f)
double mean(const ScalarField& f);
double lp_norm(const ScalarField& f, double p);  // p in {1,2,4,inf}
double max_abs(const ScalarField& f);
double min_value(const ScalarField& f);
double max_value(const ScalarField& f);

// Full (redundant) complex spectrum coefficients c_k with f = sum c_k e^{i k.x};
// used by tests (Parseval) and the basis module.
std::vector<std::complex<double>> spectrum(const ScalarField& f);

// Throws std::runtime_error naming `what` if any value is NaN/Inf.
void check_finite(const ScalarField& f, const char* what);
void check_finite(const VectorField& f, const char* what);
bool all_finite(const ScalarField& f);

}  // namespace nsfg
