#include "spinlab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <ostream>
#include <sstream>

#include "spinlab/analytic.hpp"
#include "spinlab/error.hpp"
#include "spinlab/io.hpp"
#include "spinlab/reference_configs.hpp"

namespace spinlab::cli {

namespace fs = std::filesystem;

namespace {

std::string g6(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

int stability_exit_code(StabilityClass c) {
    switch (c) {
        case StabilityClass::Stable: return kExitStable;
        case StabilityClass::MarginallyUnstable: return kExitMarginal;
        case StabilityClass::ExponentiallyUnstable: return kExitUnstable;
    }
    return kExitRuntime;
}

void print_params(const DerivedParams& p, std::ostream& out) {
    out << "ixx_aug: " << g6(p.ixx_aug) << "  izz_aug: " << g6(p.izz_aug)
        << "\n";
    out << "gamma: " << g6(p.gamma) << "  epsilon: " << g6(p.epsilon) << "\n";
    out << "alpha: " << g6(p.alpha) << "  beta: " << g6(p.beta) << "\n";
    out << "c1: " << g6(p.c1) << "  c2: " << g6(p.c2) << "\n";
    out << "u1: " << g6(p.u1) << "  u2: " << g6(p.u2) << "\n";
    out << "sigma: " << g6(p.sigma) << "  lambda: " << g6(p.lambda) << "\n";
    if (p.resonant) out << "flag: resonant (|lambda - 1| < 1e-6)\n";
    if (p.lambda_degenerate) out << "flag: lambda-degenerate\n";
    out << to_string(p.stability) << ", sigma=" << g6(p.sigma)
        << ", lambda=" << g6(p.lambda) << "\n";
}

Model parse_model(const std::string& name) {
    if (name == "full") return Model::Full;
    if (name == "first") return Model::FirstOrder;
    if (name == "analytic") return Model::Analytic;
    throw ValidationError("model", "unknown model '" + name +
                                       "' (expected full|first|analytic)");
}

Trajectory run_model(const SystemConfig& cfg, Model model, double tau_end,
                     double dt) {
    if (model == Model::Analytic)
        return analytic_trajectory(cfg, tau_end, dt);
    return propagate(cfg, model, tau_end, dt);
}

std::vector<double> parse_gamma_range(const std::string& range) {
    double lo = 0.0, hi = 0.0;
    int n = 0;
    // lo:hi:n with log spacing in |gamma|
    if (std::sscanf(range.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3)
        throw ValidationError("gamma-range", "expected LO:HI:N");
    if (n < 2) throw ValidationError("gamma-range", "need at least 2 points");
    if (lo == 0.0 || hi == 0.0 || (lo < 0) != (hi < 0))
        throw ValidationError("gamma-range",
                              "endpoints must be nonzero with equal sign");
    const double sign = lo < 0 ? -1.0 : 1.0;
    const double lla = std::log(std::abs(lo));
    const double llb = std::log(std::abs(hi));
    std::vector<double> g(n);
    for (int k = 0; k < n; ++k)
        g[k] = sign * std::exp(lla + (llb - lla) * k / (n - 1));
    return g;
}

GridAxis parse_axis(const std::string& value, const char* name) {
    GridAxis ax;
    long n = 0;
    if (std::sscanf(value.c_str(), "%lf:%lf:%ld", &ax.lo, &ax.hi, &n) == 3) {
        if (n < 1) throw GridError(std::string(name) + ": count must be >= 1");
        ax.n = static_cast<std::size_t>(n);
        if (ax.lo > ax.hi)
            throw GridError(std::string(name) + ": min exceeds max");
        return ax;
    }
    char* end = nullptr;
    ax.lo = ax.hi = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw GridError(std::string(name) + ": expected LO:HI:N or a number");
    ax.n = 1;
    return ax;
}

}  // namespace

fs::path default_out_dir() {
    if (const char* env = std::getenv("SPINLAB_OUT")) return env;
    return ".";
}

SweepGrid parse_grid_spec(const std::string& spec) {
    SweepGrid grid;
    bool have_x = false, have_y = false, have_z = false;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw GridError("grid: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        if (key == "ixx_aug") {
            grid.ixx_aug = parse_axis(val, "ixx_aug");
            have_x = true;
        } else if (key == "iyy") {
            grid.iyy = parse_axis(val, "iyy");
            have_y = true;
        } else if (key == "izz_aug") {
            grid.izz_aug = parse_axis(val, "izz_aug");
            have_z = true;
        } else if (key == "gamma") {
            char* end = nullptr;
            grid.gamma = std::strtod(val.c_str(), &end);
            if (end == val.c_str() || *end != '\0')
                throw GridError("grid: gamma must be a number");
        } else {
            throw GridError("grid: unknown key '" + key + "'");
        }
    }
    if (!have_x || !have_y || !have_z)
        throw GridError("grid: need ixx_aug, iyy and izz_aug axes");
    return grid;
}

int cmd_stability(const RunSpec& spec, std::ostream& out) {
    const SystemConfig cfg = io::load_config(spec.config_path);
    const DerivedParams p = derive_params(cfg);
    print_params(p, out);
    return stability_exit_code(p.stability);
}

int cmd_simulate(const RunSpec& spec, std::ostream& out) {
    const SystemConfig cfg = io::load_config(spec.config_path);
    const Model model = parse_model(spec.model);
    const Trajectory traj = run_model(cfg, model, spec.tau_end, spec.dt);
    const fs::path path =
        spec.out_dir / (std::string("trajectory_") + to_string(model) + ".csv");
    io::write_trajectory_csv(traj, path);
    out << "wrote " << path.string() << " (" << traj.size() << " rows)\n";
    return 0;
}

int cmd_compare(const RunSpec& spec, std::ostream& out) {
    const SystemConfig cfg = io::load_config(spec.config_path);
    std::vector<double> windows = spec.windows;
    if (windows.empty()) windows.push_back(spec.tau_end);

    const Trajectory ref = propagate(cfg, Model::Full, spec.tau_end, spec.dt);
    const Trajectory test = spec.against == "full"
                                ? propagate(cfg, Model::Full, spec.tau_end,
                                            spec.dt)
                                : analytic_trajectory(cfg, spec.tau_end,
                                                      spec.dt);

    std::vector<ErrorReport> reports;
    out << "window_hi     mre          rmse         r2\n";
    for (double w : windows) {
        reports.push_back(error_report(ref, test, {0.0, w}));
        const auto& r = reports.back();
        char line[128];
        std::snprintf(line, sizeof line, "%-12.6g  %-11.6g  %-11.6g  %.8g\n",
                      w, r.mre, r.rmse, r.r2);
        out << line;
    }
    io::write_error_table_csv(reports, spec.out_dir / "errors.csv");
    out << "wrote " << (spec.out_dir / "errors.csv").string() << "\n";

    if (!spec.gamma_range.empty()) {
        const std::vector<double> gammas = parse_gamma_range(spec.gamma_range);
        // independent runs; fan out and collect in input order
        std::vector<std::future<std::pair<double, ErrorReport>>> tasks;
        for (double g : gammas) {
            tasks.push_back(std::async(std::launch::async, [&, g] {
                SystemConfig c = cfg;
                c.spin.ixy = g * (c.platform.ibr + c.spin.izz);
                const DerivedParams p = derive_params(c);
                const Trajectory full =
                    propagate(c, Model::Full, spec.tau_end, spec.dt);
                const Trajectory ana =
                    analytic_trajectory(c, spec.tau_end, spec.dt);
                return std::make_pair(p.epsilon,
                                      error_report(full, ana,
                                                   {0.0, spec.tau_end}));
            }));
        }
        std::string csv = "gamma, epsilon, mre, mse, rmse, r2\n";
        out << "gamma         epsilon       mre\n";
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            const auto [eps, rep] = tasks[i].get();
            char b[160];
            std::snprintf(b, sizeof b, "%.9g, %.9g, %.9g, %.9g, %.9g, %.9g\n",
                          gammas[i], eps, rep.mre, rep.mse, rep.rmse, rep.r2);
            csv += b;
            std::snprintf(b, sizeof b, "%-12.6g  %-12.6g  %.6g\n", gammas[i],
                          eps, rep.mre);
            out << b;
        }
        io::write_text_atomic(spec.out_dir / "epsilon_error.csv", csv);
        out << "wrote " << (spec.out_dir / "epsilon_error.csv").string()
            << "\n";
    }
    return 0;
}

int cmd_sweep(const RunSpec& spec, std::ostream& out) {
    const SweepGrid grid = parse_grid_spec(spec.grid_spec);
    const SweepResult res = nutation_sweep(grid);
    io::write_sweep_csv(res, spec.out_dir / "sweep.csv");
    out << "wrote " << (spec.out_dir / "sweep.csv").string() << " ("
        << res.rows.size() << " stable rows, " << res.skipped
        << " non-stable points omitted)\n";
    return 0;
}

namespace {

void reproduce_example(const SystemConfig& cfg, const fs::path& dir,
                       std::ostream& out) {
    io::save_config(cfg, dir / "config.json");
    const DerivedParams p = derive_params(cfg);
    {
        std::ostringstream rep;
        print_params(p, rep);
        io::write_text_atomic(dir / "stability.txt", rep.str());
    }
    const double tau_end = 100.0, dt = 1e-3;
    const Trajectory full = propagate(cfg, Model::Full, tau_end, dt);
    const Trajectory ana = analytic_trajectory(cfg, tau_end, dt);
    io::write_trajectory_csv(full, dir / "trajectory_full.csv");
    io::write_trajectory_csv(ana, dir / "trajectory_analytic.csv");

    std::vector<ErrorReport> reports;
    std::ostringstream sum;
    sum << to_string(p.stability) << ", sigma=" << g6(p.sigma)
        << ", lambda=" << g6(p.lambda) << "\n";
    for (double w : {tau_end / 3.0, 2.0 * tau_end / 3.0, tau_end}) {
        reports.push_back(error_report(full, ana, {0.0, w}));
        sum << "tau<" << g6(w) << ": mre=" << g6(reports.back().mre)
            << " r2=" << g6(reports.back().r2) << "\n";
    }
    io::write_error_table_csv(reports, dir / "errors.csv");
    io::write_text_atomic(dir / "summary.txt", sum.str());
    out << "wrote bundle " << dir.string() << "\n";
}

void reproduce_table1(const fs::path& dir, std::ostream& out) {
    const SystemConfig cfg = reference::example1();
    io::save_config(cfg, dir / "config.json");
    const double tau_end = 300.0, dt = 1e-3;
    const Trajectory full = propagate(cfg, Model::Full, tau_end, dt);
    const Trajectory ana = analytic_trajectory(cfg, tau_end, dt);
    std::vector<ErrorReport> reports;
    std::ostringstream sum;
    sum << "analytic vs full, dt=" << g6(dt) << "\n";
    for (double w : {100.0, 200.0, 300.0}) {
        reports.push_back(error_report(full, ana, {0.0, w}));
        const auto& r = reports.back();
        sum << "tau<" << g6(w) << ": mre=" << g6(r.mre) << " mse=" << g6(r.mse)
            << " rmse=" << g6(r.rmse) << " r2=" << g6(r.r2) << "\n";
    }
    io::write_error_table_csv(reports, dir / "errors.csv");
    io::write_text_atomic(dir / "summary.txt", sum.str());
    out << "wrote bundle " << dir.string() << "\n";
}

void reproduce_sweep_surface(const fs::path& dir, std::ostream& out) {
    const SystemConfig anchor = reference::nutation_demo();
    io::save_config(anchor, dir / "config.json");
    const DerivedParams p = derive_params(anchor);
    const NutationProfile prof = nutation_profile(p);

    std::ostringstream sum;
    sum << "anchor point: theta_z0=" << g6(prof.theta_z0)
        << " sqrt(a0)=" << g6(std::sqrt(prof.a0)) << " eps_n=" << g6(prof.eps_n)
        << "\n";
    sum << "precession freqs: " << g6(prof.precession_freqs[0]) << ", "
        << g6(prof.precession_freqs[1]) << ", " << g6(prof.precession_freqs[2])
        << "\n";
    sum << "nutation freqs: " << g6(prof.nutation_freqs[0]) << ", "
        << g6(prof.nutation_freqs[1]) << "\n";

    SweepGrid grid;
    grid.ixx_aug = {81.0, 101.0, 3};
    grid.iyy = {110.0, 150.0, 9};
    grid.izz_aug = {83.0, 103.0, 3};
    grid.gamma = p.gamma;
    const SweepResult res = nutation_sweep(grid);
    io::write_sweep_csv(res, dir / "sweep.csv");
    sum << "sweep: " << res.rows.size() << " stable rows, " << res.skipped
        << " omitted\n";
    io::write_text_atomic(dir / "summary.txt", sum.str());
    out << "wrote bundle " << dir.string() << "\n";
}

void reproduce_divergent(const fs::path& dir, std::ostream& out) {
    std::ostringstream sum;
    {
        const SystemConfig cfg = reference::marginal_demo();
        io::save_config(cfg, dir / "marginal" / "config.json");
        const Trajectory t = propagate(cfg, Model::FirstOrder, 100.0, 1e-3);
        io::write_trajectory_csv(t, dir / "marginal" / "trajectory_first.csv");
        const GrowthFit fit = growth_envelope(t);
        sum << "marginal: " << to_string(fit.kind) << " slope="
            << g6(fit.slope) << " r2=" << g6(fit.r_squared) << "\n";
    }
    {
        const SystemConfig cfg = reference::unstable_demo();
        io::save_config(cfg, dir / "unstable" / "config.json");
        const Trajectory t = propagate(cfg, Model::FirstOrder, 700.0, 5e-3);
        io::write_trajectory_csv(t, dir / "unstable" / "trajectory_first.csv");
        const GrowthFit fit = growth_envelope(t);
        const DerivedParams p = derive_params(cfg);
        sum << "unstable: " << to_string(fit.kind) << " rate=" << g6(fit.rate)
            << " (sqrt(u1*u2)=" << g6(p.lambda) << ") r2="
            << g6(fit.r_squared) << "\n";
    }
    io::write_text_atomic(dir / "growth.txt", sum.str());
    out << "wrote bundle " << dir.string() << "\n";
}

}  // namespace

int cmd_reproduce(const RunSpec& spec, std::ostream& out) {
    const fs::path dir = spec.out_dir / spec.target;
    if (spec.target == "example1")
        reproduce_example(reference::example1(), dir, out);
    else if (spec.target == "example2")
        reproduce_example(reference::example2(), dir, out);
    else if (spec.target == "table1")
        reproduce_table1(dir, out);
    else if (spec.target == "fig4")
        reproduce_sweep_surface(dir, out);
    else if (spec.target == "fig5")
        reproduce_divergent(dir, out);
    else
        throw ValidationError("target",
                              "unknown target '" + spec.target +
                                  "' (example1|example2|table1|fig4|fig5)");
    return 0;
}

}  // namespace spinlab::cli
