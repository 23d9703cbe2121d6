#include "spinlab/integrate.hpp"

#include <array>
#include <cmath>

#include "spinlab/dynamics.hpp"
#include "spinlab/error.hpp"

namespace spinlab {

const char* to_string(Model m) {
    switch (m) {
        case Model::Full: return "full";
        case Model::FirstOrder: return "first";
        case Model::Analytic: return "analytic";
    }
    return "?";
}

namespace {

void check_blowup(std::span<const double> y, double tau) {
    for (double v : y) {
        if (!(std::abs(v) <= kBlowUpLimit))
            throw BlowUpError(tau, std::abs(v));
    }
}

}  // namespace

OdeSolution integrate_ode(const OdeRhs& rhs, std::span<const double> y0,
                          double tau_end, double dt) {
    if (!(dt > 0.0)) throw ValidationError("dt", "must be > 0");
    if (!(tau_end > 0.0)) throw ValidationError("tau_end", "must be > 0");

    const std::size_t n = y0.size();
    const auto nsteps = static_cast<std::size_t>(tau_end / dt + 1e-9);
    const double rem = tau_end - static_cast<double>(nsteps) * dt;
    const bool partial = rem > 1e-12 * std::max(1.0, tau_end);

    OdeSolution out;
    out.dim = n;
    out.tau.reserve(nsteps + 2);
    out.y.reserve((nsteps + 2) * n);

    std::vector<double> y(y0.begin(), y0.end());
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    auto f = [&rhs](double t, std::span<const double> s, std::span<double> d) {
        rhs(t, s, d);
    };

    auto emit = [&](double t) {
        out.tau.push_back(t);
        out.y.insert(out.y.end(), y.begin(), y.end());
    };

    emit(0.0);
    for (std::size_t k = 0; k < nsteps; ++k) {
        const double t = static_cast<double>(k) * dt;
        detail::rk4_step(f, t, dt, y, k1, k2, k3, k4, tmp);
        check_blowup(y, t + dt);
        emit(static_cast<double>(k + 1) * dt);
    }
    if (partial) {
        detail::rk4_step(f, static_cast<double>(nsteps) * dt, rem, y, k1, k2,
                         k3, k4, tmp);
        check_blowup(y, tau_end);
        emit(tau_end);
    }
    return out;
}

namespace {

// State layout for propagate: [omega(3) | quat(4) | euler(3)].
constexpr std::size_t kDim = 10;

struct PropagateRhs {
    const SystemConfig& cfg;
    const DerivedParams& params;
    Model model;

    void operator()(double tau, std::span<const double> y,
                    std::span<double> dydt) const {
        const Vec3 w_raw{y[0], y[1], y[2]};
        Vec3 wdot;
        Vec3 w_phys;
        if (model == Model::Full) {
            wdot = rhs_full(tau, w_raw, cfg);
            w_phys = w_raw;
        } else {
            // first-order state, physical reconstruction for kinematics
            wdot = rhs_first_order(tau, w_raw, params);
            const double g = params.gamma;
            w_phys = {g * w_raw.x, g * g * w_raw.y, g * w_raw.z};
        }
        const Quat q{y[3], y[4], y[5], y[6]};
        const Quat qdot = quaternion_rate(q, w_phys);
        const Vec3 th{y[7], y[8], y[9]};
        const Vec3 thdot = euler_rate(th, w_phys);

        dydt[0] = wdot.x;
        dydt[1] = wdot.y;
        dydt[2] = wdot.z;
        dydt[3] = qdot.w;
        dydt[4] = qdot.x;
        dydt[5] = qdot.y;
        dydt[6] = qdot.z;
        dydt[7] = thdot.x;
        dydt[8] = thdot.y;
        dydt[9] = thdot.z;
    }
};

}  // namespace

Trajectory propagate(const SystemConfig& cfg, Model model, double tau_end,
                     double dt) {
    if (model == Model::Analytic)
        throw ValidationError("model",
                              "propagate integrates full/first only; use "
                              "analytic_trajectory for closed forms");
    if (!(dt > 0.0)) throw ValidationError("dt", "must be > 0");
    if (!(tau_end > 0.0)) throw ValidationError("tau_end", "must be > 0");
    const DerivedParams params = derive_params(cfg);

    const auto nsteps = static_cast<std::size_t>(tau_end / dt + 1e-9);

    std::array<double, kDim> y{};
    if (model == Model::Full) {
        y[0] = cfg.initial_omega.x;
        y[1] = cfg.initial_omega.y;
        y[2] = cfg.initial_omega.z;
    } else {
        // invert the scaling; the y channel is defined only for gamma != 0
        const double g = params.gamma;
        if (cfg.initial_omega.max_abs() > 0.0) {
            if (g == 0.0)
                throw ValidationError("initial_omega",
                                      "first-order model needs gamma != 0 "
                                      "for a nonzero initial state");
            y[0] = cfg.initial_omega.x / g;
            y[1] = cfg.initial_omega.y / (g * g);
            y[2] = cfg.initial_omega.z / g;
        }
    }
    y[3] = 1.0;  // identity attitude

    const PropagateRhs rhs{cfg, params, model};

    Trajectory traj;
    traj.dt = dt;
    traj.meta = {cfg, model, dt, static_cast<double>(nsteps) * dt};
    traj.samples.reserve(nsteps + 1);

    auto emit = [&](double tau) {
        BodyState s;
        s.tau = tau;
        if (model == Model::Full) {
            s.omega = {y[0], y[1], y[2]};
        } else {
            const double g = params.gamma;
            s.omega = {g * y[0], g * g * y[1], g * y[2]};
        }
        s.quat = {y[3], y[4], y[5], y[6]};
        s.euler = {y[7], y[8], y[9]};
        traj.samples.push_back(s);
    };

    std::array<double, kDim> k1{}, k2{}, k3{}, k4{}, tmp{};
    emit(0.0);
    for (std::size_t k = 0; k < nsteps; ++k) {
        const double t = static_cast<double>(k) * dt;
        detail::rk4_step(rhs, t, dt, std::span<double>(y),
                         std::span<double>(k1), std::span<double>(k2),
                         std::span<double>(k3), std::span<double>(k4),
                         std::span<double>(tmp));
        // keep the attitude on the unit sphere
        const double qn =
            std::sqrt(y[3] * y[3] + y[4] * y[4] + y[5] * y[5] + y[6] * y[6]);
        y[3] /= qn;
        y[4] /= qn;
        y[5] /= qn;
        y[6] /= qn;
        check_blowup(std::span<const double>(y), t + dt);
        emit(static_cast<double>(k + 1) * dt);
    }
    return traj;
}

}  // namespace spinlab
