#include "diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "cutoffs.hpp"

namespace nsfg {

namespace {

constexpr double kDensityFloor = 1e-10;

ScalarField continuity_rate(const ScalarField& rho, const VectorField& u, double eps) {
    return add(scale(divergence(dealias(mul(rho, u))), -1.0),
               scale(laplacian_power(rho, 1), eps));
}

// |Hess f|^2 = sum_ij (d_i d_j f)^2
ScalarField hessian_norm2(const ScalarField& f) {
    ScalarField out = make_scalar(f.grid);
    for (int i = 0; i < f.grid.dim; ++i) {
        ScalarField di = derivative(f, i, 1);
        for (int j = 0; j < f.grid.dim; ++j) {
            ScalarField dij = derivative(di, j, 1);
            out = add(out, mul(dij, dij));
        }
    }
    return out;
}

double grad_dot_integral(const ScalarField& a, const ScalarField& b) {
    VectorField ga = gradient(a), gb = gradient(b);
    return integrate(dot(ga, gb));
}

// lambda_dot of the momentum system and its reconstruction
VectorField velocity_rate(const SystemState& state, const Params& p, const ScalarField& rho_t) {
    const GalerkinBasis& b = *state.gv.basis;
    MassOperator M = assemble_mass(state.rho, b);
    ForceBreakdown F = assemble_forces(state, p);
    std::vector<double> md = block_apply(weighted_block(rho_t, b), b, state.gv.lambda);
    std::vector<double> rhs = F.total;
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= md[i];
    GalerkinVelocity gdot;
    gdot.basis = &b;
    gdot.lambda = M.solve(rhs);
    return reconstruct(gdot);
}

}  // namespace

EnergyBreakdown energy(const SystemState& state, const Params& p) {
    EnergyBreakdown E;
    VectorField u = reconstruct(state.gv);
    E.kinetic = 0.5 * integrate(mul(state.rho, dot(u, u)));
    E.cold = (p.cold() / 10.0) *
             integrate(apply(state.rho, [](double r) { return std::pow(r, -10.0); }));
    ScalarField s = apply(state.rho, [](double r) { return std::sqrt(r); });
    VectorField gs = gradient(s);
    E.capillary = 0.5 * p.kappa_q * integrate(dot(gs, gs));
    VectorField gh = gradient(laplacian_power(state.rho, 4));
    E.hyper = 0.5 * p.hyper() * integrate(dot(gh, gh));
    E.internal = integrate(mul(shift(state.rho, p.eps), state.theta));
    E.total = E.kinetic + E.cold + E.capillary + E.hyper + E.internal;
    return E;
}

EnergyDissipation energy_dissipation(const SystemState& state, const Params& p) {
    EnergyDissipation D;
    VectorField u = reconstruct(state.gv);
    ScalarField u2 = dot(u, u);
    ScalarField lap_u2 = make_scalar(state.rho.grid);
    for (int c = 0; c < state.rho.grid.dim; ++c) {
        ScalarField lc = laplacian_power(u.comp[c], 1);
        lap_u2 = add(lap_u2, mul(lc, lc));
    }
    D.visc_lap = p.eps * integrate(lap_u2);
    D.visc_strain = 2.0 * integrate(mul(state.rho, tensor_norm2(strain(u))));
    ScalarField d5 = laplacian_power(state.rho, 5);
    D.hyper = p.eps * p.eps * integrate(mul(d5, d5));
    ScalarField rm5 = apply(state.rho, [](double r) { return std::pow(r, -5.0); });
    VectorField g5 = gradient(rm5);
    D.cold = p.eps * p.eps * integrate(dot(g5, g5));
    D.drag0 = p.r0 * integrate(u2);
    D.drag1 = p.r1 * integrate(mul(state.rho, mul(u2, u2)));
    ScalarField logr = apply(state.rho, [](double r) { return std::log(r); });
    D.log_hessian = p.kappa_q * p.eps * integrate(mul(state.rho, hessian_norm2(logr)));
    D.sink = p.eps *
             integrate(apply(state.theta, [&](double t) { return std::pow(t, p.law.alpha + 1.0); }));
    return D;
}

double energy_dissipation_residual(const SystemState& before, const SystemState& after,
                                   const Params& p, double dt) {
    double fd = (energy(after, p).total - energy(before, p).total) / dt;

    VectorField u = reconstruct(before.gv);
    ScalarField rho_t = continuity_rate(before.rho, u, p.eps);

    // kinetic: <F, lambda> - 1/2 int rho_t |u|^2
    ForceBreakdown F = assemble_forces(before, p);
    double power = 0.0;
    for (std::size_t i = 0; i < F.total.size(); ++i) power += F.total[i] * before.gv.lambda[i];
    double rate = power - 0.5 * integrate(mul(rho_t, dot(u, u)));

    // cold: d/dt (c/10) rho^-10 = -c rho^-11 rho_t
    rate -= p.cold() *
            integrate(mul(apply(before.rho, [](double r) { return std::pow(r, -11.0); }), rho_t));

    // capillary: kappa int grad(sqrt rho) . grad(rho_t / (2 sqrt rho))
    ScalarField s = apply(before.rho, [](double r) { return std::sqrt(r); });
    ScalarField s_t = make_scalar(s.grid);
    for (std::size_t i = 0; i < s_t.v.size(); ++i) s_t.v[i] = rho_t.v[i] / (2.0 * s.v[i]);
    rate += p.kappa_q * grad_dot_integral(s, s_t);

    // hyper: eps int grad(Lap^4 rho) . grad(Lap^4 rho_t)
    rate += p.hyper() *
            grad_dot_integral(laplacian_power(before.rho, 4), laplacian_power(rho_t, 4));

    // internal: int S:grad u - rho theta div u - eps theta^{alpha+1}
    double eps_sink = p.eps_sink < 0.0 ? p.eps : p.eps_sink;
    rate += 2.0 * integrate(mul(before.rho, tensor_norm2(strain(u))));
    rate -= integrate(mul(before.rho, mul(before.theta, divergence(u))));
    rate -= eps_sink * integrate(apply(before.theta, [&](double t) {
        return std::pow(t, p.law.alpha + 1.0);
    }));

    return fd - rate;
}

JungelCheck jungel_check(const ScalarField& rho) {
    if (min_value(rho) <= 0.0) throw std::invalid_argument("jungel_check: nonpositive density");
    JungelCheck J;
    ScalarField logr = apply(rho, [](double r) { return std::log(r); });
    J.lhs = integrate(mul(rho, hessian_norm2(logr)));
    ScalarField s = apply(rho, [](double r) { return std::sqrt(r); });
    J.rhs1 = integrate(hessian_norm2(s)) / 7.0;
    ScalarField q = apply(rho, [](double r) { return std::pow(r, 0.25); });
    VectorField gq = gradient(q);
    ScalarField g2 = dot(gq, gq);
    J.rhs2 = integrate(mul(g2, g2)) / 8.0;
    J.pass = J.lhs >= std::max(J.rhs1, J.rhs2) - 1e-12 * J.lhs;
    return J;
}

double bd_entropy(const SystemState& state, const Params& p) {
    if (min_value(state.rho) < kDensityFloor)
        throw std::domain_error("bd_entropy: density below floor");
    VectorField u = reconstruct(state.gv);
    ScalarField logr = apply(state.rho, [](double r) { return std::log(r); });
    VectorField w = add(u, gradient(logr));  // u + grad rho / rho
    double B = 0.5 * integrate(mul(state.rho, dot(w, w)));
    B += (p.cold() / 10.0) *
         integrate(apply(state.rho, [](double r) { return std::pow(r, -10.0); }));
    ScalarField s = apply(state.rho, [](double r) { return std::sqrt(r); });
    VectorField gs = gradient(s);
    B += 0.5 * p.kappa_q * integrate(dot(gs, gs));
    VectorField gh = gradient(laplacian_power(state.rho, 4));
    B += 0.5 * p.hyper() * integrate(dot(gh, gh));
    B -= p.r0 * integrate(logr);
    return B;
}

BDReport bd_identity(const SystemState& before, const SystemState& after, const Params& p,
                     double dt) {
    if (!(p.eps > 0.0))
        throw std::invalid_argument("bd_identity: requires eps > 0 (regularized continuity)");
    const Grid& g = before.rho.grid;
    BDReport rep;
    rep.fd_dt = (bd_entropy(after, p) - bd_entropy(before, p)) / dt;

    VectorField u = reconstruct(before.gv);
    ScalarField rho_t = continuity_rate(before.rho, u, p.eps);
    VectorField u_t = velocity_rate(before, p, rho_t);
    ScalarField logr = apply(before.rho, [](double r) { return std::log(r); });
    VectorField glog = gradient(logr);
    VectorField w = add(u, glog);

    // chain rule on each functional term under the discrete rates
    ScalarField ratio = make_scalar(g);  // rho_t / rho
    for (std::size_t i = 0; i < ratio.v.size(); ++i) ratio.v[i] = rho_t.v[i] / before.rho.v[i];
    VectorField w_t = add(u_t, gradient(ratio));
    double rate = 0.5 * integrate(mul(rho_t, dot(w, w))) +
                  integrate(mul(before.rho, dot(w, w_t)));
    rate -= p.cold() *
            integrate(mul(apply(before.rho, [](double r) { return std::pow(r, -11.0); }), rho_t));
    ScalarField s = apply(before.rho, [](double r) { return std::sqrt(r); });
    ScalarField s_t = make_scalar(g);
    for (std::size_t i = 0; i < s_t.v.size(); ++i) s_t.v[i] = rho_t.v[i] / (2.0 * s.v[i]);
    rate += p.kappa_q * grad_dot_integral(s, s_t);
    rate += p.hyper() *
            grad_dot_integral(laplacian_power(before.rho, 4), laplacian_power(rho_t, 4));
    rate -= p.r0 * integrate(ratio);
    rep.exact_rate = rate;
    rep.residual = rep.fd_dt - rep.exact_rate;

    // left-side dissipation integrals (the eta/delta coefficients are eps)
    ScalarField rm5 = apply(before.rho, [](double r) { return std::pow(r, -5.0); });
    VectorField g5 = gradient(rm5);
    rep.dissipation[0] = p.eps * integrate(dot(g5, g5));
    rep.dissipation[1] = p.kappa_q * integrate(mul(before.rho, hessian_norm2(logr)));
    ScalarField d5 = laplacian_power(before.rho, 5);
    rep.dissipation[2] = 2.0 * p.eps * integrate(mul(d5, d5));
    TensorField Gu = grad_tensor(u);
    ScalarField curl2 = make_scalar(g);
    for (int i = 0; i < g.dim; ++i)
        for (int j = 0; j < g.dim; ++j) {
            ScalarField a = sub(Gu.t[i][j], Gu.t[j][i]);
            curl2 = add(curl2, mul(a, a));
        }
    rep.dissipation[3] = 0.5 * integrate(mul(before.rho, curl2));
    ScalarField lap_r = laplacian_power(before.rho, 1);
    ScalarField lap2_over = make_scalar(g);
    for (std::size_t i = 0; i < lap2_over.v.size(); ++i)
        lap2_over.v[i] = lap_r.v[i] * lap_r.v[i] / before.rho.v[i];
    rep.dissipation[4] = p.eps * integrate(lap2_over);
    VectorField gr = gradient(before.rho);
    ScalarField gr2_over = make_scalar(g);
    {
        ScalarField gr2 = dot(gr, gr);
        for (std::size_t i = 0; i < gr2_over.v.size(); ++i)
            gr2_over.v[i] = gr2.v[i] * before.theta.v[i] / before.rho.v[i];
    }
    rep.dissipation[5] = integrate(gr2_over);

    // right-side terms R1..R8
    ScalarField divu = divergence(u);
    {
        // R1: eps int (grad rho . grad) u . grad log rho
        ScalarField r1 = make_scalar(g);
        for (int i = 0; i < g.dim; ++i)
            for (int j = 0; j < g.dim; ++j)
                r1 = add(r1, mul(gr.comp[i], mul(Gu.t[j][i], glog.comp[j])));
        rep.r_terms[0] = p.eps * integrate(r1);
    }
    {
        ScalarField gl2 = dot(glog, glog);
        ScalarField r2 = make_scalar(g);
        for (std::size_t i = 0; i < r2.v.size(); ++i)
            r2.v[i] = lap_r.v[i] * gl2.v[i] / before.rho.v[i];
        rep.r_terms[1] = p.eps * integrate(r2);
    }
    {
        ScalarField divru = divergence(dealias(mul(before.rho, u)));
        ScalarField r3 = make_scalar(g);
        for (std::size_t i = 0; i < r3.v.size(); ++i)
            r3.v[i] = divru.v[i] * lap_r.v[i] / before.rho.v[i];
        rep.r_terms[2] = -p.eps * integrate(r3);
    }
    {
        VectorField lap_u = make_vector(g);
        for (int c = 0; c < g.dim; ++c) lap_u.comp[c] = laplacian_power(u.comp[c], 1);
        VectorField glap = gradient(laplacian_power(logr, 1));
        rep.r_terms[3] = -p.eps * integrate(dot(lap_u, glap));
    }
    rep.r_terms[4] = -p.r0 * integrate(dot(u, glog));
    {
        ScalarField u2 = dot(u, u);
        rep.r_terms[5] = -p.r1 * integrate(mul(u2, dot(u, gr)));
    }
    rep.r_terms[6] = -integrate(mul(before.rho, mul(before.theta, divu)));  // R = 1
    {
        VectorField gth = gradient(before.theta);
        rep.r_terms[7] = -integrate(dot(gth, gr));
    }

    double dsum = 0.0, rsum = 0.0;
    for (double d : rep.dissipation) dsum += d;
    for (double r : rep.r_terms) rsum += r;
    rep.identity_gap = rep.fd_dt + dsum - rsum;

    // Young-split bound on R7
    double bound = p.eps * integrate(mul(before.rho, mul(divu, divu))) +
                   (1.0 / (4.0 * p.eps)) *
                       integrate(mul(before.rho, mul(before.theta, before.theta)));
    rep.r7_bound_ok = std::abs(rep.r_terms[6]) <= bound * (1.0 + 1e-12) + 1e-14;
    return rep;
}

double bd_identity_residual(const SystemState& before, const SystemState& after, const Params& p,
                            double dt) {
    return bd_identity(before, after, p, dt).residual;
}

namespace {

double mv_of_velocity(const ScalarField& rho, const VectorField& v, double n) {
    ScalarField y = dot(v, v);
    ScalarField integrand = make_scalar(rho.grid);
    for (std::size_t i = 0; i < integrand.v.size(); ++i)
        integrand.v[i] = rho.v[i] * phi_tilde_n(y.v[i], n);
    return integrate(integrand);
}

}  // namespace

double mv_functional(const SystemState& state, double n, double m, double K) {
    VectorField v = truncated_velocity(state.rho, reconstruct(state.gv), m, K);
    return mv_of_velocity(state.rho, v, n);
}

double mv_functional_untruncated(const SystemState& state, double n) {
    return mv_of_velocity(state.rho, reconstruct(state.gv), n);
}

MVCheck mv_inequality_check(const std::vector<SystemState>& states, double dt, double n,
                            const Params& p, const std::function<double(double)>& psi,
                            const std::function<double(double)>& psi_prime, double delta) {
    if (states.size() < 2) throw std::invalid_argument("mv_inequality_check: need a run history");
    if (!(delta > 0.0 && delta < 2.0))
        throw std::invalid_argument("mv_inequality_check: delta must lie in (0,2)");

    double psi_max = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        double t = states[k].t;
        if (psi(t) < -1e-12 || psi_prime(t) > 1e-12)
            throw std::invalid_argument("mv_inequality_check: psi must be >= 0 with psi' <= 0");
        psi_max = std::max(psi_max, psi(t));
    }

    MVCheck out;
    double holder_time = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        double wk = (k == 0 || k + 1 == states.size()) ? 0.5 * dt : dt;
        const SystemState& s = states[k];
        out.lhs += -psi_prime(s.t) * mv_functional_untruncated(s, n) * wk;

        VectorField u = reconstruct(s.gv);
        ScalarField y = dot(u, u);
        ScalarField rt2 = mul(s.rho, mul(s.theta, s.theta));
        double A = std::pow(integrate(apply(rt2, [&](double v) {
                       return std::pow(std::abs(v), 2.0 / (2.0 - delta));
                   })),
                            (2.0 - delta) / 2.0);
        double B = std::pow(integrate(apply(y, [&](double v) {
                       return std::pow(1.0 + phi_tilde_n_prime(v, n), 2.0 / delta);
                   })),
                            delta / 2.0);
        holder_time += A * B * wk;
    }

    const SystemState& s0 = states.front();
    VectorField u0 = reconstruct(s0.gv);
    // gamma = 2 pressure-energy slot: rho^gamma/(gamma-1) = rho^2
    ScalarField init = mul(s0.rho, dot(u0, u0));
    init = add(init, mul(s0.rho, s0.rho));
    ScalarField sq0 = apply(s0.rho, [](double r) { return std::sqrt(r); });
    VectorField gs0 = gradient(sq0);
    init = add(init, dot(gs0, gs0));
    init = sub(init, scale(apply(s0.rho, [](double r) { return std::min(std::log(r), 0.0); }),
                           p.r0));
    double E0 = energy(s0, p).total;
    out.rhs = 8.0 * psi_max * (integrate(init) + 2.0 * E0);
    out.rhs += psi(s0.t) * mv_functional_untruncated(s0, n);
    out.rhs += psi_max * holder_time;
    out.pass = out.lhs <= out.rhs * (1.0 + 1e-6);
    return out;
}

ConservationReport positivity_and_mass(const SystemState& state) {
    ConservationReport r;
    r.mass = integrate(state.rho);
    r.min_rho = min_value(state.rho);
    r.min_theta = min_value(state.theta);
    return r;
}

}  // namespace nsfg
