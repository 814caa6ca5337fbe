#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nep::cli {

struct RunConfig {
    std::string command;  // phase, timemap, solve, spectrum, branch, count, verify; "help" after --help
    std::string help_text;

    std::string model;       // built-in name
    std::string model_file;  // JSON model definition
    std::string bc = "robin";
    std::optional<double> alpha;
    std::optional<double> lambda;
    double length = 1.0;

    std::optional<double> energy;  // phase
    std::optional<double> cmin;    // timemap
    std::optional<double> cmax;
    int n = 200;
    std::string branch;

    int samples = 400;  // count
    double s_min = -30.0;  // solve
    double s_max = 30.0;
    int n_scan = 512;
    int points = 2048;

    std::string profile;  // spectrum, verify
    int k = 3;
    int grid = 512;

    std::string seed = "trivial";  // branch
    std::string seed_file;
    int steps = 400;
    int mesh = 400;
    double ds = 0.05;
    double ds_max = 0.5;
    double lambda_max = 1e12;
    int direction = 1;
    int stability_every = 10;
    int snapshot_every = 0;

    std::string out;
    std::string format = "csv";
};

/// Throws nep::Error(usage) on bad input.  `--help` yields command "help".
RunConfig parse_args(const std::vector<std::string>& args);

/// Exit status: 0 success, 1 computational or I/O failure, 2 usage.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with the exit-code mapping for usage errors.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nep::cli
