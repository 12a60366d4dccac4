/* C interface to the spectral torus simulator: whole-run drivers (run, sweep,
 * check, report) plus an opaque stepping handle for embedding.  All functions
 * return NSFG_OK on success; on failure nsfg_last_error() describes the
 * problem (thread-local).  Strings returned through char** are heap-owned by
 * the library and must be released with nsfg_free(). */
#ifndef NSFG_H
#define NSFG_H

#ifdef __cplusplus
extern "C" {
#endif

#define NSFG_OK 0
#define NSFG_ERR_INVALID 1 /* bad arguments, unknown name, config schema error */
#define NSFG_ERR_RUNTIME 2 /* run or step failed (stability, NaN, solver) */

const char* nsfg_last_error(void);
void nsfg_free(char* s);

/* Execute a configured run; artifacts go to the output directory named in the
 * config.  *termination (optional) receives the termination message. */
int nsfg_run_file(const char* config_path, char** termination);
int nsfg_run_text(const char* config_text, char** termination);

/* One run per value along the axis; *table receives the summary (terminal
 * functional values and fitted log-log slopes).  Child failures are recorded
 * in the table and reported as NSFG_ERR_RUNTIME. */
int nsfg_sweep_file(const char* config_path, const char* axis, const double* values, int count,
                    char** table);

/* Property suites: jungel, cutoffs, mass-op, thermal-odes, energy-balance.
 * *report gets one line per property (name, samples, worst margin, pass).
 * Returns NSFG_ERR_RUNTIME if any property fails. */
int nsfg_check(const char* suite, char** report);

/* Summarize a run directory or a directory of run directories: manifest hash
 * verification and terminal diagnostics rows. */
int nsfg_report(const char* directory, char** report);

/* ---- stepping handle ---- */

typedef struct nsfg_sim nsfg_sim;

/* NULL on error (see nsfg_last_error); the handle ignores the [output]
 * section and performs no file I/O. */
nsfg_sim* nsfg_sim_open(const char* config_text);
void nsfg_sim_close(nsfg_sim* sim);

int nsfg_sim_advance(nsfg_sim* sim, long steps);
double nsfg_sim_time(const nsfg_sim* sim);

/* Grid point count (per field) and velocity coefficient count. */
int nsfg_sim_sizes(const nsfg_sim* sim, int* points, int* dofs);
int nsfg_sim_density(const nsfg_sim* sim, double* buf);
int nsfg_sim_temperature(const nsfg_sim* sim, double* buf);
int nsfg_sim_velocity_coeffs(const nsfg_sim* sim, double* buf);

/* The 15 diagnostic columns (t, mass, E_total, E_kinetic, E_cold,
 * E_capillary, E_hyper, E_internal, bd_entropy, mv_n, min_rho, min_theta,
 * res_energy, res_bd, res_thermal) for the most recent step. */
int nsfg_sim_diagnostics(nsfg_sim* sim, double out[15]);

#ifdef __cplusplus
}
#endif

#endif /* NSFG_H */
