#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "spinlab/cli.hpp"
#include "spinlab/error.hpp"

namespace {

using spinlab::cli::RunSpec;

void add_common(CLI::App* cmd, RunSpec& spec, bool needs_config) {
    auto* cfg = cmd->add_option("--config", spec.config_path,
                                "system configuration (JSON)");
    if (needs_config) cfg->required();
    cmd->add_option("--out", spec.out_dir, "output directory");
    cmd->add_option("--tau-end", spec.tau_end, "dimensionless end time");
    cmd->add_option("--dt", spec.dt, "integrator step");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "spinlab: attitude dynamics of a platform with an unbalanced rotor"};
    app.require_subcommand(1);

    RunSpec spec;
    spec.out_dir = spinlab::cli::default_out_dir();

    auto* stability = app.add_subcommand(
        "stability", "derive reduced coefficients and classify the regime");
    add_common(stability, spec, true);

    auto* simulate =
        app.add_subcommand("simulate", "integrate or evaluate a trajectory");
    add_common(simulate, spec, true);
    simulate->add_option("--model", spec.model, "full | first | analytic");

    auto* compare = app.add_subcommand(
        "compare", "error metrics between full and closed-form runs");
    add_common(compare, spec, true);
    compare->add_option("--windows", spec.windows,
                        "comparison window upper edges")
        ->delimiter(',');
    compare->add_option("--gamma-range", spec.gamma_range,
                        "LO:HI:N log-spaced unbalance sweep");
    compare->add_option("--against", spec.against,
                        "baseline model: analytic | full");

    auto* sweep = app.add_subcommand(
        "sweep", "relative nutation amplitude over an inertia grid");
    add_common(sweep, spec, false);
    sweep->add_option("--grid", spec.grid_spec,
                      "ixx_aug=LO:HI:N;iyy=LO:HI:N;izz_aug=LO:HI:N[;gamma=G]")
        ->required();

    auto* reproduce = app.add_subcommand(
        "reproduce", "write a canned demonstration bundle");
    add_common(reproduce, spec, false);
    reproduce
        ->add_option("--target", spec.target,
                     "example1 | example2 | table1 | fig4 | fig5")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return spinlab::cli::kExitUsage;
    }

    try {
        if (stability->parsed())
            return spinlab::cli::cmd_stability(spec, std::cout);
        if (simulate->parsed())
            return spinlab::cli::cmd_simulate(spec, std::cout);
        if (compare->parsed())
            return spinlab::cli::cmd_compare(spec, std::cout);
        if (sweep->parsed()) return spinlab::cli::cmd_sweep(spec, std::cout);
        if (reproduce->parsed())
            return spinlab::cli::cmd_reproduce(spec, std::cout);
    } catch (const spinlab::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return spinlab::cli::kExitUsage;
    } catch (const spinlab::GridError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return spinlab::cli::kExitUsage;
    } catch (const spinlab::BlowUpError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return spinlab::cli::kExitRuntime;
    } catch (const spinlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return spinlab::cli::kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return spinlab::cli::kExitRuntime + 1;
    }
    return spinlab::cli::kExitUsage;
}
