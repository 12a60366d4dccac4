#include "nsfg.h"

#include <cstring>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "checks.hpp"
#include "config.hpp"
#include "momentum.hpp"
#include "sim.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_out(char** slot, const std::string& s) {
    if (slot) *slot = dup_string(s);
}

// Run fn, mapping std::invalid_argument to NSFG_ERR_INVALID and everything
// else to NSFG_ERR_RUNTIME.
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return NSFG_ERR_INVALID;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return NSFG_ERR_RUNTIME;
    }
}

int run_common(const nsfg::RunConfig& cfg, char** termination) {
    nsfg::RunResult r = nsfg::run(cfg);
    set_out(termination, r.termination);
    if (r.exit_code != 0) {
        g_last_error = r.termination;
        return NSFG_ERR_RUNTIME;
    }
    return NSFG_OK;
}

}  // namespace

struct nsfg_sim {
    nsfg::RunConfig cfg;
    std::shared_ptr<const nsfg::GalerkinBasis> basis;
    nsfg::SystemState prev, cur;
    bool stepped = false;
};

extern "C" {

const char* nsfg_last_error(void) { return g_last_error.c_str(); }

void nsfg_free(char* s) { delete[] s; }

int nsfg_run_file(const char* config_path, char** termination) {
    return guarded([&] {
        if (!config_path) throw std::invalid_argument("config_path is null");
        return run_common(nsfg::load_config(config_path), termination);
    });
}

int nsfg_run_text(const char* config_text, char** termination) {
    return guarded([&] {
        if (!config_text) throw std::invalid_argument("config_text is null");
        return run_common(nsfg::parse_config(config_text), termination);
    });
}

int nsfg_sweep_file(const char* config_path, const char* axis, const double* values, int count,
                    char** table) {
    return guarded([&] {
        if (!config_path || !axis) throw std::invalid_argument("null argument");
        if (count > 0 && !values) throw std::invalid_argument("values is null");
        nsfg::SweepSummary s = nsfg::sweep(nsfg::load_config(config_path), axis,
                                           std::vector<double>(values, values + std::max(count, 0)));
        set_out(table, s.table());
        if (s.exit_code != 0) {
            g_last_error = "one or more sweep runs failed";
            return NSFG_ERR_RUNTIME;
        }
        return NSFG_OK;
    });
}

int nsfg_check(const char* suite, char** report) {
    return guarded([&] {
        if (!suite) throw std::invalid_argument("suite is null");
        nsfg::CheckReport rep = nsfg::run_check(suite);
        set_out(report, rep.text());
        if (!rep.pass) {
            g_last_error = "check suite failed: " + rep.suite;
            return NSFG_ERR_RUNTIME;
        }
        return NSFG_OK;
    });
}

int nsfg_report(const char* directory, char** report) {
    return guarded([&] {
        if (!directory) throw std::invalid_argument("directory is null");
        set_out(report, nsfg::report_directory(directory));
        return NSFG_OK;
    });
}

nsfg_sim* nsfg_sim_open(const char* config_text) {
    nsfg_sim* sim = nullptr;
    int rc = guarded([&] {
        if (!config_text) throw std::invalid_argument("config_text is null");
        auto s = std::make_unique<nsfg_sim>();
        s->cfg = nsfg::parse_config(config_text);
        s->basis = std::make_shared<nsfg::GalerkinBasis>(
            nsfg::build_basis(nsfg::make_grid(s->cfg.dim, s->cfg.points, s->cfg.length),
                              s->cfg.modes));
        s->cur = nsfg::make_initial_state(s->cfg, s->basis);
        s->prev = s->cur;
        sim = s.release();
        return NSFG_OK;
    });
    (void)rc;
    return sim;
}

void nsfg_sim_close(nsfg_sim* sim) { delete sim; }

int nsfg_sim_advance(nsfg_sim* sim, long steps) {
    return guarded([&] {
        if (!sim || steps < 0) throw std::invalid_argument("bad advance arguments");
        for (long i = 0; i < steps; ++i) {
            if (sim->cfg.dt > nsfg::stable_dt(sim->cur, sim->cfg.params))
                throw std::runtime_error("stability bound violated");
            nsfg::SystemState next = nsfg::advance_state(sim->cur, sim->cfg.params, sim->cfg.dt);
            sim->prev = sim->cur;
            sim->cur = next;
            sim->stepped = true;
        }
        return NSFG_OK;
    });
}

double nsfg_sim_time(const nsfg_sim* sim) { return sim ? sim->cur.t : -1.0; }

int nsfg_sim_sizes(const nsfg_sim* sim, int* points, int* dofs) {
    return guarded([&] {
        if (!sim) throw std::invalid_argument("sim is null");
        if (points) *points = static_cast<int>(sim->cur.rho.v.size());
        if (dofs) *dofs = static_cast<int>(sim->cur.gv.lambda.size());
        return NSFG_OK;
    });
}

int nsfg_sim_density(const nsfg_sim* sim, double* buf) {
    return guarded([&] {
        if (!sim || !buf) throw std::invalid_argument("null argument");
        std::memcpy(buf, sim->cur.rho.v.data(), sim->cur.rho.v.size() * sizeof(double));
        return NSFG_OK;
    });
}

int nsfg_sim_temperature(const nsfg_sim* sim, double* buf) {
    return guarded([&] {
        if (!sim || !buf) throw std::invalid_argument("null argument");
        std::memcpy(buf, sim->cur.theta.v.data(), sim->cur.theta.v.size() * sizeof(double));
        return NSFG_OK;
    });
}

int nsfg_sim_velocity_coeffs(const nsfg_sim* sim, double* buf) {
    return guarded([&] {
        if (!sim || !buf) throw std::invalid_argument("null argument");
        std::memcpy(buf, sim->cur.gv.lambda.data(), sim->cur.gv.lambda.size() * sizeof(double));
        return NSFG_OK;
    });
}

int nsfg_sim_diagnostics(nsfg_sim* sim, double out[15]) {
    return guarded([&] {
        if (!sim || !out) throw std::invalid_argument("null argument");
        double dt = sim->stepped ? sim->cfg.dt : 0.0;
        nsfg::FunctionalRecord r =
            nsfg::record_for(sim->prev, sim->cur, sim->cfg.params, dt, sim->cfg.cutoffs);
        const double cols[15] = {r.t,     r.mass,      r.E_total,   r.E_kinetic, r.E_cold,
                                 r.E_capillary, r.E_hyper, r.E_internal, r.bd,    r.mv_n,
                                 r.min_rho,     r.min_theta, r.res_energy, r.res_bd,
                                 r.res_thermal};
        std::memcpy(out, cols, sizeof(cols));
        return NSFG_OK;
    });
}

}  // extern "C"
