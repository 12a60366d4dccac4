#include "thermal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nsfg {

namespace {

// adaptive Simpson on [a,b] to absolute tolerance tol
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate_01(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

void require_nonneg(const ScalarField& theta, const char* what) {
    if (min_value(theta) < 0.0)
        throw std::invalid_argument(std::string("negative ") + what);
}

double kappa0_at(const HeatLaw& law, double theta) {
    return law.kappa0_fn ? law.kappa0_fn(theta) : law.kappa0;
}

}  // namespace

void validate_heat_law(const HeatLaw& law) {
    if (!(law.alpha >= 2.0)) throw std::invalid_argument("heat law: alpha must be >= 2");
    if (!(law.c1 > 0.0 && law.c1 <= 1.0))
        throw std::invalid_argument("heat law: c1 must lie in (0,1]");
    if (!(law.kappa0 >= law.c1 && law.kappa0 <= 1.0 / law.c1))
        throw std::invalid_argument("heat law: kappa0 outside [c1, 1/c1]");
}

double kappa(const HeatLaw& law, double theta) {
    return kappa0_at(law, theta) * (1.0 + std::pow(theta, law.alpha));
}

HFunction make_h_reciprocal() {
    HFunction h;
    h.h = [](double z) { return 1.0 / (1.0 + z); };
    h.h_prime = [](double z) { double w = 1.0 + z; return -1.0 / (w * w); };
    h.h_double_prime = [](double z) { double w = 1.0 + z; return 2.0 / (w * w * w); };
    h.label = "1/(1+z)";
    return h;
}

HFunction make_h_power(double omega) {
    if (!(omega > 0.0 && omega < 1.0))
        throw std::invalid_argument("h power: omega must lie in (0,1)");
    HFunction h;
    h.h = [omega](double z) { return std::pow(1.0 + z, -omega); };
    h.h_prime = [omega](double z) { return -omega * std::pow(1.0 + z, -omega - 1.0); };
    h.h_double_prime = [omega](double z) {
        return omega * (omega + 1.0) * std::pow(1.0 + z, -omega - 2.0);
    };
    h.label = "(1+z)^-omega";
    return h;
}

HFunction make_h_one() {
    HFunction h;
    h.h = [](double) { return 1.0; };
    h.h_prime = [](double) { return 0.0; };
    h.h_double_prime = [](double) { return 0.0; };
    h.label = "1";
    return h;
}

bool h_admissible(const HFunction& h) {
    if (std::abs(h.h(0.0) - 1.0) > 1e-12) return false;
    double prev = h.h(0.0);
    for (int i = 0; i <= 200; ++i) {
        double z = i == 0 ? 0.0 : std::pow(10.0, -3.0 + 9.0 * i / 200.0);
        double hz = h.h(z);
        if (hz > prev + 1e-12) return false;  // must be non-increasing
        prev = hz;
        double hp = h.h_prime(z);
        if (hp > 1e-12) return false;
        if (h.h_double_prime(z) < 2.0 * hp * hp - 1e-12) return false;
    }
    return true;
}

ScalarField K_of(const ScalarField& theta, const HeatLaw& law) {
    validate_heat_law(law);
    require_nonneg(theta, "temperature");
    if (!law.kappa0_fn) {
        double k0 = law.kappa0, a = law.alpha;
        return apply(theta, [k0, a](double t) {
            return k0 * (t + std::pow(t, a + 1.0) / (a + 1.0));
        });
    }
    return apply(theta, [&](double t) {
        return integrate_01([&](double z) { return kappa(law, z); }, 0.0, t, 1e-10);
    });
}

ScalarField K_inverse(const ScalarField& kvals, const HeatLaw& law) {
    validate_heat_law(law);
    require_nonneg(kvals, "conductivity primitive");
    return apply(kvals, [&](double y) {
        if (y == 0.0) return 0.0;
        double t = y / kappa0_at(law, 0.0);  // kappa >= kappa0 -> upper bound guess
        for (int it = 0; it < 100; ++it) {
            double k0 = law.kappa0_fn ? kappa0_at(law, t) : law.kappa0;
            double K = law.kappa0_fn
                           ? integrate_01([&](double z) { return kappa(law, z); }, 0.0, t, 1e-12)
                           : k0 * (t + std::pow(t, law.alpha + 1.0) / (law.alpha + 1.0));
            double step = (K - y) / kappa(law, t);
            t -= step;
            if (t < 0.0) t = 0.0;
            if (std::abs(step) <= 1e-13 * (1.0 + t)) break;
        }
        return t;
    });
}

ScalarField Q_h(const ScalarField& theta, const HFunction& h) {
    require_nonneg(theta, "temperature");
    return apply(theta, [&](double t) { return integrate_01(h.h, 0.0, t, 1e-10); });
}

ScalarField K_h(const ScalarField& theta, const HFunction& h, const HeatLaw& law) {
    validate_heat_law(law);
    require_nonneg(theta, "temperature");
    return apply(theta, [&](double t) {
        return integrate_01([&](double z) { return kappa(law, z) * h.h(z); }, 0.0, t, 1e-10);
    });
}

namespace {

// S : grad u with S = 2 rho D(u); symmetric S makes this 2 rho |D(u)|^2
ScalarField viscous_heating(const ScalarField& rho, const VectorField& u) {
    return scale(mul(rho, tensor_norm2(strain(u))), 2.0);
}

ScalarField div_kappa_grad(const ScalarField& kap, const ScalarField& theta) {
    VectorField g = gradient(theta);
    return divergence(mul(kap, g));
}

}  // namespace

ThermalStepReport step_temperature(const ScalarField& theta, const ScalarField& rho,
                                   const VectorField& u, const HeatLaw& law, double eps, double dt,
                                   double eps_mass, double eps_sink) {
    validate_heat_law(law);
    if (!(rho.grid == theta.grid) || !(u.grid == theta.grid))
        throw std::invalid_argument("step_temperature: grid mismatch");
    if (!(dt > 0.0) || !(eps >= 0.0)) throw std::invalid_argument("step_temperature: bad dt/eps");
    require_nonneg(theta, "temperature");
    if (min_value(rho) <= 0.0) throw std::invalid_argument("step_temperature: nonpositive density");
    if (eps_mass < 0.0) eps_mass = eps;
    if (eps_sink < 0.0) eps_sink = eps;

    ScalarField m = shift(rho, eps_mass);                // eps + rho
    ScalarField kap = apply(theta, [&](double t) { return kappa(law, t); });
    ScalarField sink_coef = apply(theta, [&](double t) {  // linearized eps theta^{alpha+1}
        return eps_sink * std::pow(t, law.alpha);
    });
    ScalarField divu = divergence(u);
    // conservative form: d/dt((eps+rho) theta) carries a rho_t theta part, with
    // rho_t supplied by the continuity equation rho_t = -div(rho u) + eps Lap rho
    ScalarField rho_t = add(scale(divergence(dealias(mul(rho, u))), -1.0),
                            scale(laplacian_power(rho, 1), eps));
    ScalarField rhs = viscous_heating(rho, u);                         // S : grad u
    rhs = sub(rhs, mul(rho, mul(theta, divu)));                        // - rho theta div u
    rhs = sub(rhs, divergence(dealias(mul(mul(rho, theta), u))));      // - div(rho theta u)
    rhs = sub(rhs, mul(rho_t, theta));                                 // - rho_t theta_n
    rhs = add(rhs, scale(mul(m, theta), 1.0 / dt));                    // + m theta_n / dt

    double m_bar = max_value(m);
    double k_bar = max_value(kap);
    double s_bar = max_value(sink_coef);
    double a = m_bar / dt + s_bar;

    ScalarField th = theta;  // iterate
    ThermalStepReport rep;
    bool converged = false;
    double prev_delta = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int it = 0; it < 200; ++it) {
        // (m_bar/dt + s_bar - k_bar Lap) th_next =
        //   rhs + (m_bar - m)/dt th + (s_bar - sink) th + div((kap - k_bar) grad th)
        ScalarField f = rhs;
        f = add(f, scale(mul(sub(make_scalar(th.grid, m_bar), m), th), 1.0 / dt));
        f = add(f, mul(sub(make_scalar(th.grid, s_bar), sink_coef), th));
        f = add(f, div_kappa_grad(sub(kap, make_scalar(th.grid, k_bar)), th));
        ScalarField th_next = helmholtz_solve(f, a, k_bar);
        double delta = max_abs(sub(th_next, th));
        th = th_next;
        rep.iterations = it + 1;
        double scale_ref = 1.0 + max_abs(th);
        if (delta <= 1e-13 * scale_ref) {
            converged = true;
            break;
        }
        // rounding plateau: stop improving while already far below step accuracy
        if (delta >= 0.5 * prev_delta) {
            if (++stalled >= 3 && delta <= 1e-10 * scale_ref) {
                converged = true;
                break;
            }
        } else {
            stalled = 0;
        }
        prev_delta = delta;
    }
    if (!converged) throw std::runtime_error("step_temperature: fixed point did not converge");

    // clip-and-record negative undershoots
    for (double& t : th.v)
        if (t < 0.0) {
            rep.clipped_mass += -t;
            t = 0.0;
        }
    rep.clipped_mass *= th.grid.volume() / static_cast<double>(th.grid.size());

    // discrete balance residual at the new state (lagged kappa, explicit transport)
    ScalarField resid = scale(mul(m, sub(th, theta)), 1.0 / dt);
    resid = add(resid, mul(rho_t, theta));
    resid = add(resid, divergence(dealias(mul(mul(rho, theta), u))));
    resid = sub(resid, div_kappa_grad(kap, th));
    resid = add(resid, mul(sink_coef, th));
    resid = sub(resid, viscous_heating(rho, u));
    resid = add(resid, mul(rho, mul(theta, divu)));
    rep.balance_residual = lp_norm(resid, 2.0);

    rep.theta_new = th;
    rep.min_theta = min_value(th);
    return rep;
}

double renormalized_residual(const ScalarField& theta_old, const ScalarField& theta_new,
                             const ScalarField& rho_old, const ScalarField& rho_new,
                             const VectorField& u, const HFunction& h, const HeatLaw& law,
                             double eps, double dt) {
    validate_heat_law(law);
    require_nonneg(theta_old, "temperature");
    require_nonneg(theta_new, "temperature");

    ScalarField qh_old = Q_h(theta_old, h);
    ScalarField qh_new = Q_h(theta_new, h);
    ScalarField m_old = shift(rho_old, eps);
    ScalarField m_new = shift(rho_new, eps);

    ScalarField R = scale(sub(mul(m_new, qh_new), mul(m_old, qh_old)), 1.0 / dt);
    R = add(R, divergence(dealias(mul(mul(rho_new, qh_new), u))));
    R = sub(R, laplacian_power(K_h(theta_new, h, law), 1));

    ScalarField hth = apply(theta_new, h.h);
    ScalarField hpth = apply(theta_new, h.h_prime);
    R = add(R, apply(theta_new, [&](double t) {
        return eps * std::pow(t, law.alpha + 1.0) * h.h(t);
    }));
    R = sub(R, mul(hth, scale(mul(rho_new, tensor_norm2(strain(u))), 2.0)));
    VectorField gth = gradient(theta_new);
    ScalarField kth = apply(theta_new, [&](double t) { return kappa(law, t); });
    R = add(R, mul(kth, mul(hpth, dot(gth, gth))));
    R = add(R, mul(hth, mul(rho_new, mul(theta_new, divergence(u)))));
    R = sub(R, scale(mul(laplacian_power(rho_new, 1), sub(qh_new, mul(theta_new, hth))), eps));

    return integrate(R);
}

}  // namespace nsfg
