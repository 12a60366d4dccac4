#include "momentum.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nsfg {

namespace {

constexpr double kDensityFloor = 1e-10;

Eigen::MatrixXd as_matrix(const std::vector<double>& block, int N) {
    Eigen::MatrixXd M(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) M(i, j) = block[i * N + j];
    return M;
}

}  // namespace

std::vector<double> weighted_block(const ScalarField& w, const GalerkinBasis& b) {
    ScalarField wd = dealias(w);
    int N = b.N;
    std::vector<double> block(static_cast<std::size_t>(N) * N);
    for (int i = 0; i < N; ++i) {
        ScalarField wei = mul(wd, b.fields[i]);
        for (int j = i; j < N; ++j) {
            double v = integrate(mul(wei, b.fields[j]));
            block[i * N + j] = v;
            block[j * N + i] = v;
        }
    }
    return block;
}

std::vector<double> block_apply(const std::vector<double>& block, const GalerkinBasis& b,
                                const std::vector<double>& lambda) {
    int N = b.N, dim = b.grid.dim;
    std::vector<double> out(lambda.size(), 0.0);
    for (int c = 0; c < dim; ++c)
        for (int i = 0; i < N; ++i) {
            double s = 0.0;
            for (int j = 0; j < N; ++j) s += block[i * N + j] * lambda[c * N + j];
            out[c * N + i] = s;
        }
    return out;
}

MassOperator assemble_mass(const ScalarField& rho, const GalerkinBasis& b) {
    if (min_value(rho) <= 0.0) throw std::invalid_argument("assemble_mass: nonpositive density");
    MassOperator M;
    M.basis = &b;
    M.block = weighted_block(rho, b);
    int N = b.N;
    Eigen::MatrixXd A = as_matrix(M.block, N);
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("assemble_mass: mass matrix not positive definite");
    Eigen::MatrixXd L = llt.matrixL();
    M.chol.assign(L.data(), L.data() + N * N);  // column-major
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    M.inverse_norm = 1.0 / es.eigenvalues().minCoeff();
    return M;
}

std::vector<double> MassOperator::solve(const std::vector<double>& rhs) const {
    int N = basis->N, dim = basis->grid.dim;
    Eigen::Map<const Eigen::MatrixXd> L(chol.data(), N, N);
    std::vector<double> out(rhs.size());
    for (int c = 0; c < dim; ++c) {
        Eigen::Map<const Eigen::VectorXd> rv(rhs.data() + c * N, N);
        Eigen::VectorXd y = L.triangularView<Eigen::Lower>().solve(rv);
        Eigen::VectorXd x = L.transpose().triangularView<Eigen::Upper>().solve(y);
        for (int i = 0; i < N; ++i) out[c * N + i] = x[i];
    }
    return out;
}

ForceBreakdown assemble_forces(const SystemState& state, const Params& p) {
    const GalerkinBasis& b = *state.gv.basis;
    const Grid& g = b.grid;
    if (min_value(state.rho) < kDensityFloor)
        throw std::domain_error("assemble_forces: density below floor");

    VectorField u = reconstruct(state.gv);
    TensorField D = strain(u);
    TensorField Gu = grad_tensor(u);
    ScalarField sq = apply(state.rho, [](double r) { return std::sqrt(r); });
    ScalarField lap_sq = laplacian_power(sq, 1);
    VectorField grad_sq = gradient(sq);
    VectorField grad_rho = gradient(state.rho);
    ScalarField p_gas = mul(state.rho, state.theta);  // P = R rho theta, R = 1
    ScalarField cold = apply(state.rho, [](double r) { return std::pow(r, -10.0); });
    ScalarField hyper9 = laplacian_power(state.rho, 9);
    ScalarField u2 = dot(u, u);

    int dofs = b.dofs();
    ForceBreakdown F;
    for (auto* v : {&F.convection, &F.viscous, &F.pressure, &F.biharmonic, &F.cold_pressure,
                    &F.cross, &F.hyper, &F.drag0, &F.drag1, &F.capillary, &F.total})
        v->assign(dofs, 0.0);

    auto fill = [&](std::vector<double>& out, int c, const ScalarField& Gc, const char* name) {
        check_finite(Gc, name);
        for (int j = 0; j < b.N; ++j) out[c * b.N + j] = mode_inner(Gc, b, j);
    };

    for (int c = 0; c < g.dim; ++c) {
        // convection: + int rho u (x) u : grad psi  ->  - div(rho u u_c)
        ScalarField conv = make_scalar(g);
        for (int d = 0; d < g.dim; ++d)
            conv = sub(conv, derivative(mul(state.rho, mul(u.comp[c], u.comp[d])), d, 1));
        fill(F.convection, c, conv, "convection");

        // viscous: - 2 int rho D(u) : grad psi  ->  + 2 sum_d d_d(rho D_cd)
        ScalarField visc = make_scalar(g);
        for (int d = 0; d < g.dim; ++d)
            visc = add(visc, scale(derivative(mul(state.rho, D.t[c][d]), d, 1), 2.0));
        fill(F.viscous, c, visc, "viscous");

        // pressure: + int P div psi  ->  - d_c P
        fill(F.pressure, c, scale(derivative(p_gas, c, 1), -1.0), "pressure");

        // biharmonic: - eps int Lap u . Lap psi  ->  - eps Lap^2 u_c
        fill(F.biharmonic, c, scale(laplacian_power(u.comp[c], 2), -p.bi()), "biharmonic");

        // cold pressure: - eps int rho^-10 div psi  ->  + eps d_c(rho^-10)
        fill(F.cold_pressure, c, scale(derivative(cold, c, 1), p.cold()), "cold pressure");

        // cross: - eps int (grad rho . grad) u . psi
        ScalarField cr = make_scalar(g);
        for (int d = 0; d < g.dim; ++d) cr = add(cr, mul(grad_rho.comp[d], Gu.t[c][d]));
        fill(F.cross, c, scale(cr, -p.cross()), "cross");

        // hyper: + eps int rho grad(Lap^9 rho) . psi
        fill(F.hyper, c, scale(mul(state.rho, derivative(hyper9, c, 1)), p.hyper()), "hyper");

        // drag: - r0 u - r1 rho |u|^2 u
        fill(F.drag0, c, scale(u.comp[c], -p.r0), "drag0");
        fill(F.drag1, c, scale(mul(state.rho, mul(u2, u.comp[c])), -p.r1), "drag1");

        // capillary pair: - 2 kappa int Lap(sqrt rho) grad(sqrt rho) . psi
        //                 - kappa int Lap(sqrt rho) sqrt(rho) div psi
        ScalarField cap = scale(mul(lap_sq, grad_sq.comp[c]), -2.0 * p.kappa_q);
        cap = add(cap, scale(derivative(mul(lap_sq, sq), c, 1), p.kappa_q));
        fill(F.capillary, c, cap, "capillary");
    }

    for (int i = 0; i < dofs; ++i)
        F.total[i] = F.convection[i] + F.viscous[i] + F.pressure[i] + F.biharmonic[i] +
                     F.cold_pressure[i] + F.cross[i] + F.hyper[i] + F.drag0[i] + F.drag1[i] +
                     F.capillary[i];
    return F;
}

namespace {

// rho_t from the continuity equation, matching the transport discretization
ScalarField continuity_rate(const ScalarField& rho, const VectorField& u, double eps) {
    return add(scale(divergence(dealias(mul(rho, u))), -1.0),
               scale(laplacian_power(rho, 1), eps));
}

std::vector<double> lambda_rate(const SystemState& state, const Params& p, const MassOperator& M,
                                const std::vector<double>& mdot_block) {
    ForceBreakdown F = assemble_forces(state, p);
    std::vector<double> rhs = F.total;
    std::vector<double> md = block_apply(mdot_block, *state.gv.basis, state.gv.lambda);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= md[i];
    return M.solve(rhs);
}

}  // namespace

GalerkinVelocity step_velocity(const SystemState& state, const Params& p, double dt,
                               VelocityScheme scheme) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_velocity: dt must be positive");
    const GalerkinBasis& b = *state.gv.basis;
    MassOperator M = assemble_mass(state.rho, b);
    VectorField u = reconstruct(state.gv);
    std::vector<double> mdot = weighted_block(continuity_rate(state.rho, u, p.eps), b);

    GalerkinVelocity out = state.gv;
    if (scheme == VelocityScheme::rk2) {
        std::vector<double> k1 = lambda_rate(state, p, M, mdot);
        SystemState mid = state;
        for (std::size_t i = 0; i < k1.size(); ++i)
            mid.gv.lambda[i] = state.gv.lambda[i] + 0.5 * dt * k1[i];
        std::vector<double> k2 = lambda_rate(mid, p, M, mdot);
        for (std::size_t i = 0; i < k2.size(); ++i)
            out.lambda[i] = state.gv.lambda[i] + dt * k2[i];
        return out;
    }

    // Picard-iterated implicit Euler
    SystemState iter = state;
    double resid = 0.0;
    for (int it = 0; it < 50; ++it) {
        std::vector<double> rate = lambda_rate(iter, p, M, mdot);
        resid = 0.0;
        for (std::size_t i = 0; i < rate.size(); ++i) {
            double next = state.gv.lambda[i] + dt * rate[i];
            resid = std::max(resid, std::abs(next - iter.gv.lambda[i]));
            iter.gv.lambda[i] = next;
        }
        if (resid <= 1e-10) return iter.gv;
    }
    throw std::runtime_error("step_velocity: Picard iteration stalled, residual " +
                             std::to_string(resid));
}

double kinetic_energy_balance(const SystemState& before, const SystemState& after,
                              const Params& p, double dt) {
    const GalerkinBasis& b = *before.gv.basis;
    auto kinetic = [&](const SystemState& s) {
        std::vector<double> block = weighted_block(s.rho, b);
        std::vector<double> Ml = block_apply(block, b, s.gv.lambda);
        double e = 0.0;
        for (std::size_t i = 0; i < Ml.size(); ++i) e += s.gv.lambda[i] * Ml[i];
        return 0.5 * e;
    };
    double fd = (kinetic(after) - kinetic(before)) / dt;

    ForceBreakdown F = assemble_forces(before, p);
    double power = 0.0;
    for (std::size_t i = 0; i < F.total.size(); ++i) power += F.total[i] * before.gv.lambda[i];

    VectorField u = reconstruct(before.gv);
    std::vector<double> mdot = weighted_block(continuity_rate(before.rho, u, p.eps), b);
    std::vector<double> md = block_apply(mdot, b, before.gv.lambda);
    double half_mdot = 0.0;
    for (std::size_t i = 0; i < md.size(); ++i) half_mdot += before.gv.lambda[i] * md[i];
    half_mdot *= 0.5;

    return fd - (power - half_mdot);
}

double stable_dt(const SystemState& state, const Params& p) {
    const GalerkinBasis& b = *state.gv.basis;
    double k2max = 0.0;
    double box = two_pi / b.grid.length;
    for (const BasisMode& m : b.modes) {
        double k2 = 0.0;
        for (int d = 0; d < b.grid.dim; ++d) k2 += (m.k[d] * box) * (m.k[d] * box);
        k2max = std::max(k2max, k2);
    }
    VectorField u = reconstruct(state.gv);
    double umax = 0.0;
    for (int d = 0; d < b.grid.dim; ++d) umax = std::max(umax, max_abs(u.comp[d]));
    double rmin = min_value(state.rho), rmax = max_value(state.rho);
    double gradr = 0.0;
    VectorField gr = gradient(state.rho);
    for (int d = 0; d < b.grid.dim; ++d) gradr = std::max(gradr, max_abs(gr.comp[d]));

    double rate = 2.0 * rmax * k2max + p.bi() * k2max * k2max +
                  p.cross() * gradr * std::sqrt(k2max) + p.r0 + p.r1 * rmax * umax * umax;
    rate /= rmin;
    // the high-order density term forces u through rho, so its linearization
    // is a dispersive oscillation with frequency sqrt(eps_h |k|^20), not a
    // diffusion rate eps_h |k|^18
    rate += std::sqrt(p.hyper() * std::pow(k2max, 10.0) * rmax / rmin);
    double dt = rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
    if (umax > 0.0) dt = std::min(dt, 0.5 * b.grid.h() / umax);
    return dt;
}

}  // namespace nsfg
