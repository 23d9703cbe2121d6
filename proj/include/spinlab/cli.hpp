#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "spinlab/analysis.hpp"

namespace spinlab::cli {

/// Exit codes: `stability` maps the regime to 0/1/2; anything above 2 is
/// an error (3 usage/validation, 4 runtime failure).
inline constexpr int kExitStable = 0;
inline constexpr int kExitMarginal = 1;
inline constexpr int kExitUnstable = 2;
inline constexpr int kExitUsage = 3;
inline constexpr int kExitRuntime = 4;

struct RunSpec {
    std::filesystem::path config_path;
    std::filesystem::path out_dir = ".";
    std::string model = "full";          // full | first | analytic
    double tau_end = 100.0;
    double dt = 1e-3;
    std::vector<double> windows;         // upper edges; empty -> {tau_end}
    std::string grid_spec;               // sweep grid, see parse_grid_spec
    std::string gamma_range;             // compare sweep, "lo:hi:n"
    std::string against = "analytic";    // compare baseline: analytic | full
    std::string target;                  // reproduce target
};

/// "ixx_aug=81:101:3;iyy=110:150:9;izz_aug=83:103:3;gamma=-1e-4"
SweepGrid parse_grid_spec(const std::string& spec);

int cmd_stability(const RunSpec& spec, std::ostream& out);
int cmd_simulate(const RunSpec& spec, std::ostream& out);
int cmd_compare(const RunSpec& spec, std::ostream& out);
int cmd_sweep(const RunSpec& spec, std::ostream& out);
int cmd_reproduce(const RunSpec& spec, std::ostream& out);

/// Default output directory: $SPINLAB_OUT when set, else ".".
std::filesystem::path default_out_dir();

}  // namespace spinlab::cli
