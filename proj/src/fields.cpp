#include "fields.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace nsfg {

std::size_t Grid::size() const {
    std::size_t s = 1;
    for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
    return s;
}

double Grid::volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= length;
    return v;
}

Grid make_grid(int dim, int n, double length) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("grid dim must be 1, 2 or 3");
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("points per axis must be even and >= 8");
    if (!(length > 0.0)) throw std::invalid_argument("grid length must be positive");
    return Grid{dim, n, length};
}

ScalarField make_scalar(const Grid& g, double fill) {
    return ScalarField{g, std::vector<double>(g.size(), fill)};
}

VectorField make_vector(const Grid& g) {
    VectorField u{g, {}};
    for (int c = 0; c < g.dim; ++c) u.comp[c] = make_scalar(g);
    return u;
}

ScalarField sample(const Grid& g, const std::function<double(const std::array<double, 3>&)>& f) {
    ScalarField out = make_scalar(g);
    const double h = g.h();
    std::array<int, 3> id{0, 0, 0};
    const std::size_t total = g.size();
    for (std::size_t i = 0; i < total; ++i) {
        std::array<double, 3> x{id[0] * h, id[1] * h, id[2] * h};
        // row-major: id[0] slowest; map so axis 0 is x regardless of dim
        out.v[i] = f(x);
        for (int d = g.dim - 1; d >= 0; --d) {
            if (++id[d] < g.n) break;
            id[d] = 0;
        }
    }
    return out;
}

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

// FFT workspace per grid shape. Plans + buffers are shared; a mutex serializes
// transforms so field operations stay safe to call from multiple threads.
struct Workspace {
    std::mutex mtx;
    int dim = 0, n = 0;
    std::size_t nreal = 0, ncplx = 0;
    double* rbuf = nullptr;
    fftw_complex* cbuf = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;

    Workspace(int dim_, int n_) : dim(dim_), n(n_) {
        std::array<int, 3> dims{n, n, n};
        nreal = 1;
        for (int d = 0; d < dim; ++d) nreal *= static_cast<std::size_t>(n);
        ncplx = nreal / n * (n / 2 + 1);
        rbuf = fftw_alloc_real(nreal);
        cbuf = fftw_alloc_complex(ncplx);
        fwd = fftw_plan_dft_r2c(dim, dims.data(), rbuf, cbuf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r(dim, dims.data(), cbuf, rbuf, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw std::runtime_error("fftw plan creation failed");
    }
    ~Workspace() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(rbuf);
        fftw_free(cbuf);
    }
};

Workspace& workspace(const Grid& g) {
    static std::mutex cache_mtx;
    static std::map<std::pair<int, int>, std::unique_ptr<Workspace>> cache;
    std::lock_guard<std::mutex> lk(cache_mtx);
    auto key = std::make_pair(g.dim, g.n);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<Workspace>(g.dim, g.n)).first;
    return *it->second;
}

inline int signed_k(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }

// Applies `fn(k0,k1,k2) -> complex multiplier` to the half-spectrum of f.
ScalarField apply_multiplier(const ScalarField& f,
                             const std::function<std::complex<double>(int, int, int)>& fn) {
    const Grid& g = f.grid;
    Workspace& ws = workspace(g);
    std::lock_guard<std::mutex> lk(ws.mtx);
    std::memcpy(ws.rbuf, f.v.data(), sizeof(double) * ws.nreal);
    fftw_execute(ws.fwd);

    // Flush round-off-level coefficients: high-order multipliers (|k|^18 for
    // the ninth Laplacian) would otherwise amplify FFT leakage of exactly
    // representable modes into O(1) garbage.
    double maxmag2 = 0.0;
    for (std::size_t i = 0; i < ws.ncplx; ++i) {
        double m2 = ws.cbuf[i][0] * ws.cbuf[i][0] + ws.cbuf[i][1] * ws.cbuf[i][1];
        if (m2 > maxmag2) maxmag2 = m2;
    }
    const double thr2 = maxmag2 * 1e-28;  // (1e-14 relative)^2
    for (std::size_t i = 0; i < ws.ncplx; ++i) {
        double m2 = ws.cbuf[i][0] * ws.cbuf[i][0] + ws.cbuf[i][1] * ws.cbuf[i][1];
        if (m2 < thr2) ws.cbuf[i][0] = ws.cbuf[i][1] = 0.0;
    }

    const int n = g.n;
    const int nc = n / 2 + 1;            // last-axis complex extent
    const int n0 = g.dim >= 2 ? n : 1;   // outer extents (axis order: 0 slowest)
    const int n1 = g.dim >= 3 ? n : 1;
    // r2c layout: [a][b][c] with c halved on the last axis. Map axes so that
    // axis 0 of the grid is the slowest index in all dims.
    std::size_t idx = 0;
    const double norm = 1.0 / static_cast<double>(ws.nreal);
    if (g.dim == 1) {
        for (int c = 0; c < nc; ++c, ++idx) {
            std::complex<double> m = fn(c, 0, 0);
            std::complex<double> z(ws.cbuf[idx][0], ws.cbuf[idx][1]);
            z *= m * norm;
            ws.cbuf[idx][0] = z.real();
            ws.cbuf[idx][1] = z.imag();
        }
    } else if (g.dim == 2) {
        for (int a = 0; a < n0; ++a)
            for (int c = 0; c < nc; ++c, ++idx) {
                std::complex<double> m = fn(signed_k(a, n), c, 0);
                std::complex<double> z(ws.cbuf[idx][0], ws.cbuf[idx][1]);
                z *= m * norm;
                ws.cbuf[idx][0] = z.real();
                ws.cbuf[idx][1] = z.imag();
            }
    } else {
        for (int a = 0; a < n0; ++a)
            for (int b = 0; b < n1; ++b)
                for (int c = 0; c < nc; ++c, ++idx) {
                    std::complex<double> m = fn(signed_k(a, n), signed_k(b, n), c);
                    std::complex<double> z(ws.cbuf[idx][0], ws.cbuf[idx][1]);
                    z *= m * norm;
                    ws.cbuf[idx][0] = z.real();
                    ws.cbuf[idx][1] = z.imag();
                }
    }
    fftw_execute(ws.bwd);
    ScalarField out{g, std::vector<double>(ws.nreal)};
    std::memcpy(out.v.data(), ws.rbuf, sizeof(double) * ws.nreal);
    return out;
}

}  // namespace

ScalarField add(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid, b.grid);
    ScalarField out = a;
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
    return out;
}

ScalarField sub(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid, b.grid);
    ScalarField out = a;
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
    return out;
}

ScalarField mul(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid, b.grid);
    ScalarField out = a;
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= b.v[i];
    return out;
}

ScalarField scale(const ScalarField& a, double s) {
    ScalarField out = a;
    for (double& x : out.v) x *= s;
    return out;
}

ScalarField shift(const ScalarField& a, double s) {
    ScalarField out = a;
    for (double& x : out.v) x += s;
    return out;
}

ScalarField apply(const ScalarField& a, const std::function<double(double)>& f) {
    ScalarField out = a;
    for (double& x : out.v) x = f(x);
    return out;
}

VectorField add(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid, b.grid);
    VectorField out = a;
    for (int c = 0; c < a.grid.dim; ++c) out.comp[c] = add(a.comp[c], b.comp[c]);
    return out;
}

VectorField scale(const VectorField& a, double s) {
    VectorField out = a;
    for (int c = 0; c < a.grid.dim; ++c) out.comp[c] = scale(a.comp[c], s);
    return out;
}

VectorField mul(const ScalarField& s, const VectorField& a) {
    require_same_grid(s.grid, a.grid);
    VectorField out = a;
    for (int c = 0; c < a.grid.dim; ++c) out.comp[c] = mul(s, a.comp[c]);
    return out;
}

ScalarField dot(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid, b.grid);
    ScalarField out = make_scalar(a.grid);
    for (int c = 0; c < a.grid.dim; ++c)
        for (std::size_t i = 0; i < out.v.size(); ++i)
            out.v[i] += a.comp[c].v[i] * b.comp[c].v[i];
    return out;
}

ScalarField derivative(const ScalarField& f, int axis, int order) {
    const Grid& g = f.grid;
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("derivative axis out of range");
    if (order < 1) throw std::invalid_argument("derivative order must be >= 1");
    check_finite(f, "derivative input");
    const double kf = two_pi / g.length;
    const int nyq = g.n / 2;
    const bool odd = order % 2 != 0;
    return apply_multiplier(f, [=](int k0, int k1, int k2) {
        int k = axis == 0 ? k0 : (axis == 1 ? k1 : k2);
        if (odd && (k == nyq || k == -nyq)) return std::complex<double>(0.0, 0.0);
        std::complex<double> ik(0.0, k * kf);
        std::complex<double> m(1.0, 0.0);
        for (int o = 0; o < order; ++o) m *= ik;
        return m;
    });
}

ScalarField laplacian_power(const ScalarField& f, int p) {
    if (p < 1 || p > 9) throw std::invalid_argument("laplacian power must be in [1,9]");
    const double kf = two_pi / f.grid.length;
    return apply_multiplier(f, [=](int k0, int k1, int k2) {
        double k2sum = (double(k0) * k0 + double(k1) * k1 + double(k2) * k2) * kf * kf;
        double m = 1.0;
        for (int o = 0; o < p; ++o) m *= -k2sum;
        return std::complex<double>(m, 0.0);
    });
}

VectorField gradient(const ScalarField& f) {
    VectorField out = make_vector(f.grid);
    for (int c = 0; c < f.grid.dim; ++c) out.comp[c] = derivative(f, c, 1);
    return out;
}

ScalarField divergence(const VectorField& u) {
    ScalarField out = make_scalar(u.grid);
    for (int c = 0; c < u.grid.dim; ++c) out = add(out, derivative(u.comp[c], c, 1));
    return out;
}

TensorField grad_tensor(const VectorField& u) {
    TensorField T{u.grid, {}};
    for (int i = 0; i < u.grid.dim; ++i)
        for (int j = 0; j < u.grid.dim; ++j)
            T.t[i][j] = derivative(u.comp[i], j, 1);
    return T;
}

TensorField strain(const VectorField& u) {
    TensorField G = grad_tensor(u);
    TensorField D{u.grid, {}};
    for (int i = 0; i < u.grid.dim; ++i)
        for (int j = 0; j < u.grid.dim; ++j)
            D.t[i][j] = scale(add(G.t[i][j], G.t[j][i]), 0.5);
    return D;
}

ScalarField tensor_norm2(const TensorField& T) {
    ScalarField out = make_scalar(T.grid);
    for (int i = 0; i < T.grid.dim; ++i)
        for (int j = 0; j < T.grid.dim; ++j)
            for (std::size_t k = 0; k < out.v.size(); ++k)
                out.v[k] += T.t[i][j].v[k] * T.t[i][j].v[k];
    return out;
}

ScalarField contract(const TensorField& A, const TensorField& B) {
    require_same_grid(A.grid, B.grid);
    ScalarField out = make_scalar(A.grid);
    for (int i = 0; i < A.grid.dim; ++i)
        for (int j = 0; j < A.grid.dim; ++j)
            for (std::size_t k = 0; k < out.v.size(); ++k)
                out.v[k] += A.t[i][j].v[k] * B.t[i][j].v[k];
    return out;
}

ScalarField dealias(const ScalarField& f) {
    const int cut = f.grid.n / 3;
    return apply_multiplier(f, [=](int k0, int k1, int k2) {
        bool keep = std::abs(k0) <= cut && std::abs(k1) <= cut && std::abs(k2) <= cut;
        return std::complex<double>(keep ? 1.0 : 0.0, 0.0);
    });
}

VectorField dealias(const VectorField& u) {
    VectorField out = u;
    for (int c = 0; c < u.grid.dim; ++c) out.comp[c] = dealias(u.comp[c]);
    return out;
}

ScalarField helmholtz_solve(const ScalarField& f, double a, double b) {
    if (!(a > 0.0) || b < 0.0) throw std::invalid_argument("helmholtz_solve needs a > 0, b >= 0");
    const double kf = two_pi / f.grid.length;
    return apply_multiplier(f, [=](int k0, int k1, int k2) {
        double k2sum = (double(k0) * k0 + double(k1) * k1 + double(k2) * k2) * kf * kf;
        return std::complex<double>(1.0 / (a + b * k2sum), 0.0);
    });
}

ScalarField diffusion_exp(const ScalarField& f, double c, double dt) {
    if (c < 0.0 || dt < 0.0) throw std::invalid_argument("diffusion_exp needs c, dt >= 0");
    const double kf = two_pi / f.grid.length;
    return apply_multiplier(f, [=](int k0, int k1, int k2) {
        double k2sum = (double(k0) * k0 + double(k1) * k1 + double(k2) * k2) * kf * kf;
        return std::complex<double>(std::exp(-c * k2sum * dt), 0.0);
    });
}

double mean(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.v) s += x;
    return s / static_cast<double>(f.v.size());
}

double integrate(const ScalarField& f) { return mean(f) * f.grid.volume(); }

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

double min_value(const ScalarField& f) {
    double m = f.v.empty() ? 0.0 : f.v[0];
    for (double x : f.v) m = std::min(m, x);
    return m;
}

double max_value(const ScalarField& f) {
    double m = f.v.empty() ? 0.0 : f.v[0];
    for (double x : f.v) m = std::max(m, x);
    return m;
}

double lp_norm(const ScalarField& f, double p) {
    if (std::isinf(p)) return max_abs(f);
    if (p != 1.0 && p != 2.0 && p != 3.0 && p != 4.0)
        throw std::invalid_argument("lp_norm supports p in {1,2,3,4,inf}");
    double s = 0.0;
    for (double x : f.v) s += std::pow(std::abs(x), p);
    s = s / static_cast<double>(f.v.size()) * f.grid.volume();
    return std::pow(s, 1.0 / p);
}

std::vector<std::complex<double>> spectrum(const ScalarField& f) {
    const Grid& g = f.grid;
    Workspace& ws = workspace(g);
    std::vector<std::complex<double>> half(ws.ncplx);
    {
        std::lock_guard<std::mutex> lk(ws.mtx);
        std::memcpy(ws.rbuf, f.v.data(), sizeof(double) * ws.nreal);
        fftw_execute(ws.fwd);
        const double norm = 1.0 / static_cast<double>(ws.nreal);
        for (std::size_t i = 0; i < ws.ncplx; ++i)
            half[i] = std::complex<double>(ws.cbuf[i][0], ws.cbuf[i][1]) * norm;
    }
    // expand to the full redundant spectrum via conjugate symmetry
    const int n = g.n;
    const int nc = n / 2 + 1;
    std::vector<std::complex<double>> full(g.size());
    const int n0 = g.dim >= 2 ? n : 1;
    const int n1 = g.dim >= 3 ? n : 1;
    auto half_at = [&](int a, int b, int c) {
        std::size_t i = 0;
        if (g.dim == 1) i = static_cast<std::size_t>(c);
        else if (g.dim == 2) i = static_cast<std::size_t>(a) * nc + c;
        else i = (static_cast<std::size_t>(a) * n + b) * nc + c;
        return half[i];
    };
    std::size_t idx = 0;
    for (int a = 0; a < n0; ++a)
        for (int b = 0; b < n1; ++b)
            for (int c = 0; c < n; ++c, ++idx) {
                if (c < nc) {
                    full[idx] = half_at(a, b, c);
                } else {
                    int am = a == 0 ? 0 : n0 - a;
                    int bm = b == 0 ? 0 : n1 - b;
                    int cm = n - c;
                    full[idx] = std::conj(half_at(am, bm, cm));
                }
            }
    return full;
}

bool all_finite(const ScalarField& f) {
    for (double x : f.v)
        if (!std::isfinite(x)) return false;
    return true;
}

void check_finite(const ScalarField& f, const char* what) {
    if (!all_finite(f))
        throw std::runtime_error(std::string("non-finite values in ") + what);
}

void check_finite(const VectorField& f, const char* what) {
    for (int c = 0; c < f.grid.dim; ++c) check_finite(f.comp[c], what);
}

}  // namespace nsfg
