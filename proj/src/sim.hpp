// End-to-end runs: initial-condition presets, the transport -> momentum ->
// thermal time loop, CSV diagnostics, binary state snapshots, hashed run
// manifests, parameter sweeps with fitted log-log slopes, and directory
// reports.
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "config.hpp"
#include "diagnostics.hpp"

namespace nsfg {

// Build the initial state for the configured preset; throws if the density
// floor nu or temperature positivity is violated.
SystemState make_initial_state(const RunConfig& c, std::shared_ptr<const GalerkinBasis> basis);

// One full time step: velocity, then density, then temperature, all advanced
// from the same incoming state.
SystemState advance_state(const SystemState& s, const Params& p, double dt);

struct RunResult {
    int exit_code = 0;          // 0 ok, 1 runtime failure (stability, NaN, step error)
    std::string termination;    // "completed" or a diagnostic message
    std::vector<FunctionalRecord> records;
    std::shared_ptr<const GalerkinBasis> basis;
    SystemState final_state;
};

// Execute the configured run and write artifacts (config echo, run.csv,
// optional final snapshot, manifest with content hashes) into the output
// directory. Deterministic: identical configs give bitwise-identical CSV.
RunResult run(const RunConfig& c);

// CSV serialization with the fixed, versioned column set.
std::string csv_header();
std::string csv_row(const FunctionalRecord& r);
FunctionalRecord record_for(const SystemState& before, const SystemState& after, const Params& p,
                            double dt, const CutoffSpec& cut);

// Little-endian binary snapshot: magic "NSFG1", u32 dim, u32 points,
// f64 length, u32 modes, f64 t, then rho, lambda, theta as f64 arrays.
void write_snapshot(const std::string& path, const SystemState& s);
struct Snapshot {
    std::shared_ptr<const GalerkinBasis> basis;
    SystemState state;
};
Snapshot read_snapshot(const std::string& path);  // throws on bad magic/size

uint64_t fnv1a_file(const std::string& path);  // throws on unreadable file

struct SweepEntry {
    double value = 0.0;
    std::string directory;
    int exit_code = 0;
    std::string termination;
    FunctionalRecord terminal;
};

struct SweepSummary {
    std::string axis;
    std::vector<SweepEntry> entries;
    // Fitted log-log slope of each terminal column against the axis value,
    // over successful runs with positive values (absent otherwise).
    std::map<std::string, double> slopes;
    int exit_code = 0;  // nonzero if any child run failed
    std::string table() const;
};

// axis in {eps, kappa_q, r0, r1, N, dt, n_cutoff, K_cutoff, m_cutoff};
// throws on unknown axis or empty value list. Child-run failures are
// recorded and the sweep continues.
SweepSummary sweep(const RunConfig& base, const std::string& axis,
                   const std::vector<double>& values);

// Slope of log(y) against log(x) by least squares; throws if sizes mismatch,
// fewer than two points, or any value is not positive.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Summarize a run directory (or a directory of run directories): manifest
// integrity and the terminal diagnostics row of each run.
std::string report_directory(const std::string& dir);

}  // namespace nsfg
