// Command-line front end over the C API: run, sweep, check, report.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nsfg.h>

namespace {

void print_and_free(char* text) {
    if (text) {
        std::fputs(text, stdout);
        nsfg_free(text);
    }
}

// 0 on success, 1 on runtime failure, 2 on usage/config errors.
int to_exit(int rc) { return rc == NSFG_OK ? 0 : rc == NSFG_ERR_INVALID ? 2 : 1; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral torus simulator for a regularized compressible flow model"};
    app.require_subcommand(1);

    std::string config_path, axis, suite, directory;
    std::vector<double> values;

    CLI::App* cmd_run = app.add_subcommand("run", "Execute a configured run");
    cmd_run->add_option("config", config_path, "Config file")->required();

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "One run per value along a parameter axis");
    cmd_sweep->add_option("config", config_path, "Base config file")->required();
    cmd_sweep->add_option("--axis", axis, "eps, kappa_q, r0, r1, N, dt, n_cutoff, K_cutoff, m_cutoff")
        ->required();
    cmd_sweep->add_option("--values", values, "Axis values")->required()->expected(-1);

    CLI::App* cmd_check = app.add_subcommand("check", "Run a property suite");
    cmd_check->add_option("suite", suite, "jungel, cutoffs, mass-op, thermal-odes, energy-balance")
        ->required();

    CLI::App* cmd_report = app.add_subcommand("report", "Summarize run directories");
    cmd_report->add_option("dir", directory, "Run directory or a directory of runs")->required();

    CLI11_PARSE(app, argc, argv);

    int rc = NSFG_OK;
    if (cmd_run->parsed()) {
        char* termination = nullptr;
        rc = nsfg_run_file(config_path.c_str(), &termination);
        if (termination) std::printf("termination: %s\n", termination);
        nsfg_free(termination);
    } else if (cmd_sweep->parsed()) {
        char* table = nullptr;
        rc = nsfg_sweep_file(config_path.c_str(), axis.c_str(),
                             values.empty() ? nullptr : values.data(),
                             static_cast<int>(values.size()), &table);
        print_and_free(table);
    } else if (cmd_check->parsed()) {
        char* report = nullptr;
        rc = nsfg_check(suite.c_str(), &report);
        print_and_free(report);
    } else if (cmd_report->parsed()) {
        char* report = nullptr;
        rc = nsfg_report(directory.c_str(), &report);
        print_and_free(report);
    }
    if (rc != NSFG_OK) std::fprintf(stderr, "error: %s\n", nsfg_last_error());
    return to_exit(rc);
}
