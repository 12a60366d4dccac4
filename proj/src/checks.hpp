// Named property suites runnable from the CLI: randomized inequality checks
// and refinement-order probes with machine-readable pass/fail reports.
#pragma once

#include <string>
#include <vector>

namespace nsfg {

struct PropertyResult {
    std::string name;
    int samples = 0;
    double worst_margin = 0.0;  // most adverse observed margin; >= 0 passes
    bool pass = false;
};

struct CheckReport {
    std::string suite;
    std::vector<PropertyResult> properties;
    bool pass = false;
    std::string text() const;  // one line per property
};

std::vector<std::string> check_suites();
// Throws std::invalid_argument on an unknown suite name.
CheckReport run_check(const std::string& suite);

}  // namespace nsfg
