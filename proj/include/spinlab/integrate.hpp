#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "spinlab/geom.hpp"
#include "spinlab/model.hpp"

namespace spinlab {

/// Abort threshold for runaway states (exponentially unstable runs).
inline constexpr double kBlowUpLimit = 1e12;

struct BodyState {
    double tau = 0.0;
    Vec3 omega;    // dimensionless platform angular velocity
    Quat quat;     // platform -> inertial
    Vec3 euler;    // small-angle Z-Y-X triple (theta_x, theta_y, theta_z)
};

enum class Model { Full, FirstOrder, Analytic };

const char* to_string(Model m);

struct TrajectoryMeta {
    SystemConfig config;
    Model model = Model::Full;
    double dt = 1e-3;
    double tau_end = 0.0;
};

/// Uniformly sampled trajectory: samples[k].tau == k * dt.
struct Trajectory {
    double dt = 1e-3;
    std::vector<BodyState> samples;
    TrajectoryMeta meta;

    std::size_t size() const { return samples.size(); }
    const BodyState& operator[](std::size_t k) const { return samples[k]; }
};

using OdeRhs =
    std::function<void(double, std::span<const double>, std::span<double>)>;

/// Dense output of the generic integrator: sample k lives at
/// y[k * dim .. (k+1) * dim).
struct OdeSolution {
    std::size_t dim = 0;
    std::vector<double> tau;
    std::vector<double> y;

    std::span<const double> state(std::size_t k) const {
        return {y.data() + k * dim, dim};
    }
};

/// Classical fixed-step RK4.  Samples after every step; the final step is
/// shortened so the last sample lands exactly on tau_end.  Throws
/// BlowUpError when any state component exceeds kBlowUpLimit.
OdeSolution integrate_ode(const OdeRhs& rhs, std::span<const double> y0,
                          double tau_end, double dt);

/// Integrates the chosen angular-velocity model together with quaternion
/// kinematics and the small-angle Euler rates, starting from the config's
/// initial state (attitude at identity).  For Model::FirstOrder the stored
/// omega is the physical reconstruction of the scaled first-order state.
Trajectory propagate(const SystemConfig& cfg, Model model, double tau_end,
                     double dt);

namespace detail {

/// Single RK4 step of a callable rhs(t, const double* y, double* dydt) over
/// a fixed-size buffer.  Used by both the generic integrator and propagate.
template <class Rhs>
void rk4_step(Rhs&& rhs, double t, double h, std::span<double> y,
              std::span<double> k1, std::span<double> k2, std::span<double> k3,
              std::span<double> k4, std::span<double> tmp) {
    const std::size_t n = y.size();
    rhs(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace detail

}  // namespace spinlab
