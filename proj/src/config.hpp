// Run configuration: strict INI-style parsing (sections, key = value, '#'
// comments), schema validation with every error listed, and a canonical echo
// used for manifests and reproduction.
#pragma once

#include <string>
#include <vector>

#include "state.hpp"

namespace nsfg {

struct InitialSpec {
    std::string preset = "equilibrium";  // equilibrium, density-bump, shear,
                                         // hot-spot, random-trig
    double amplitude = 0.1;
    int wavenumber = 1;
    unsigned seed = 0;
    double nu = 0.1;      // required lower bound on the initial density
    double theta0 = 1.0;  // background temperature
};

struct OutputSpec {
    std::string directory = "out";
    int cadence = 1;             // record diagnostics every this many steps
    bool snapshot_final = true;  // write a binary state snapshot at the end
};

struct CutoffSpec {
    double n = 1.0;  // log-energy cutoff level
    double m = 0.0;  // density lower truncation; <= 0 means untruncated
    double K = 0.0;  // density upper truncation; <= 0 means untruncated
};

struct RunConfig {
    int dim = 1;
    int points = 64;
    double length = two_pi;
    int modes = 8;  // Galerkin scalar modes per velocity component
    double dt = 1e-3;
    double t_end = 0.1;
    Params params;
    InitialSpec initial;
    OutputSpec output;
    CutoffSpec cutoffs;
};

// Parse and validate; throws std::invalid_argument listing every schema error
// (unknown section, unknown key, malformed value, violated constraint).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);  // throws on unreadable file

// Canonical round-trippable text form: parse_config(serialize_config(c))
// reproduces c.
std::string serialize_config(const RunConfig& c);

}  // namespace nsfg
