// Finite-dimensional velocity space X_N: real trigonometric modes on the torus,
// L2-orthonormal, ordered by |k|^2 then lexicographically, cos before sin.
// N counts scalar modes per velocity component; coefficient vectors have
// length N * dim (mode index fastest, component index slowest).
#pragma once

#include <vector>

#include "fields.hpp"

namespace nsfg {

struct BasisMode {
    std::array<int, 3> k{0, 0, 0};
    bool is_sin = false;  // false: cos(k.x) (or the constant for k = 0)
};

struct GalerkinBasis {
    Grid grid;
    int N = 0;                         // scalar modes per component
    std::vector<BasisMode> modes;      // size N
    std::vector<ScalarField> fields;   // sampled normalized mode functions
    int dofs() const { return N * grid.dim; }
};

// Throws if N exceeds the resolvable (dealias-safe) mode count of the grid.
GalerkinBasis build_basis(const Grid& g, int N);

struct GalerkinVelocity {
    const GalerkinBasis* basis = nullptr;
    std::vector<double> lambda;  // N * dim
};

GalerkinVelocity zero_velocity(const GalerkinBasis& b);
GalerkinVelocity project(const VectorField& v, const GalerkinBasis& b);
VectorField reconstruct(const GalerkinVelocity& gv);

// Scalar-mode inner products: coefficient of mode j in component c is
// lambda[c * N + j].
double mode_inner(const ScalarField& f, const GalerkinBasis& b, int j);

// C(N) = sum of sup norms of all N*dim vector basis elements; bounds
// ||reconstruct(lambda)||_inf <= C(N) * ||lambda||_2.
double norm_equivalence_constant(const GalerkinBasis& b);

}  // namespace nsfg
