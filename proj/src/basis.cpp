#include "basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsfg {

namespace {

int mode_capacity_cut(const Grid& g) { return g.n / 3; }  // dealias-safe band

std::vector<std::array<int, 3>> half_space_wavevectors(const Grid& g) {
    const int cut = mode_capacity_cut(g);
    std::vector<std::array<int, 3>> ks;
    auto lo = [&](int d) { return d < g.dim ? -cut : 0; };
    auto hi = [&](int d) { return d < g.dim ? cut : 0; };
    for (int k0 = lo(0); k0 <= hi(0); ++k0)
        for (int k1 = lo(1); k1 <= hi(1); ++k1)
            for (int k2 = lo(2); k2 <= hi(2); ++k2) {
                std::array<int, 3> k{k0, k1, k2};
                // half-space representative: first nonzero component positive
                int first = 0;
                for (int d = 0; d < 3; ++d)
                    if (k[d] != 0) { first = k[d]; break; }
                if (first < 0) continue;
                ks.push_back(k);
            }
    std::sort(ks.begin(), ks.end(), [](const auto& a, const auto& b) {
        long na = long(a[0]) * a[0] + long(a[1]) * a[1] + long(a[2]) * a[2];
        long nb = long(b[0]) * b[0] + long(b[1]) * b[1] + long(b[2]) * b[2];
        if (na != nb) return na < nb;
        return a < b;
    });
    return ks;
}

ScalarField sample_mode(const Grid& g, const BasisMode& m) {
    const double V = g.volume();
    const bool zero = m.k[0] == 0 && m.k[1] == 0 && m.k[2] == 0;
    const double kf = two_pi / g.length;
    if (zero) return make_scalar(g, 1.0 / std::sqrt(V));
    const double amp = std::sqrt(2.0 / V);
    return sample(g, [&](const std::array<double, 3>& x) {
        double phase = kf * (m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2]);
        return amp * (m.is_sin ? std::sin(phase) : std::cos(phase));
    });
}

}  // namespace

GalerkinBasis build_basis(const Grid& g, int N) {
    if (N < 1) throw std::invalid_argument("basis size must be >= 1");
    auto ks = half_space_wavevectors(g);
    GalerkinBasis b;
    b.grid = g;
    b.N = N;
    for (const auto& k : ks) {
        bool zero = k[0] == 0 && k[1] == 0 && k[2] == 0;
        b.modes.push_back(BasisMode{k, false});
        if (!zero) b.modes.push_back(BasisMode{k, true});
        if (static_cast<int>(b.modes.size()) >= N) break;
    }
    if (static_cast<int>(b.modes.size()) < N)
        throw std::invalid_argument("basis size exceeds resolvable modes on this grid");
    b.modes.resize(N);
    for (const auto& m : b.modes) b.fields.push_back(sample_mode(g, m));
    return b;
}

GalerkinVelocity zero_velocity(const GalerkinBasis& b) {
    return GalerkinVelocity{&b, std::vector<double>(b.dofs(), 0.0)};
}

double mode_inner(const ScalarField& f, const GalerkinBasis& b, int j) {
    return integrate(mul(f, b.fields[static_cast<std::size_t>(j)]));
}

GalerkinVelocity project(const VectorField& v, const GalerkinBasis& b) {
    if (!(v.grid == b.grid)) throw std::invalid_argument("project: grid mismatch");
    GalerkinVelocity gv = zero_velocity(b);
    for (int c = 0; c < b.grid.dim; ++c)
        for (int j = 0; j < b.N; ++j)
            gv.lambda[static_cast<std::size_t>(c) * b.N + j] = mode_inner(v.comp[c], b, j);
    return gv;
}

VectorField reconstruct(const GalerkinVelocity& gv) {
    const GalerkinBasis& b = *gv.basis;
    VectorField out = make_vector(b.grid);
    for (int c = 0; c < b.grid.dim; ++c)
        for (int j = 0; j < b.N; ++j) {
            double lam = gv.lambda[static_cast<std::size_t>(c) * b.N + j];
            if (lam == 0.0) continue;
            const ScalarField& e = b.fields[static_cast<std::size_t>(j)];
            for (std::size_t i = 0; i < e.v.size(); ++i)
                out.comp[c].v[i] += lam * e.v[i];
        }
    return out;
}

double norm_equivalence_constant(const GalerkinBasis& b) {
    double c = 0.0;
    for (const auto& e : b.fields) c += max_abs(e);
    return c * b.grid.dim;  // each scalar mode appears once per component
}

}  // namespace nsfg
