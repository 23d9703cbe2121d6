#pragma once

#include "spinlab/geom.hpp"
#include "spinlab/model.hpp"

namespace spinlab {

/// Condition-number ceiling above which the equivalent inertia is treated
/// as numerically singular.
inline constexpr double kInertiaConditionLimit = 1e12;

/// Rotation of the rotor frame relative to the platform frame after
/// dimensionless time tau: a rotation by tau about the shared y-axis.
Mat3 rotor_rotation(double tau);

/// Analytic d/dtau of rotor_rotation.
Mat3 rotor_rotation_rate(double tau);

struct SpinInertiaAt {
    Mat3 i1;     // equivalent spin inertia in the platform frame
    Mat3 i1dot;  // its analytic tau-derivative
};

/// Equivalent spin inertia seen from the platform frame at time tau,
/// together with its derivative.  Both are exactly symmetric.
SpinInertiaAt spin_inertia_at(double tau, const SpinInertia& spin);

Mat3 platform_inertia_matrix(const PlatformInertia& platform);

/// Full nonlinear dimensionless attitude equation: returns d(omega)/d(tau)
/// for the platform angular velocity, with the rotor spinning at unit rate
/// about +y.  Throws NumericalError if the total inertia is ill-conditioned.
Vec3 rhs_full(double tau, const Vec3& omega, const SystemConfig& cfg);

/// First-order reduced system for the scaled state w1: the x-z rows are
/// linear with 2tau-periodic coefficients and unit-frequency forcing, the
/// y row is quadratic in (w1.x, w1.z).
Vec3 rhs_first_order(double tau, const Vec3& w1, const DerivedParams& p);

/// Small-angle Z-Y-X Euler rates.
Vec3 euler_rate(const Vec3& theta, const Vec3& omega);

/// Kinematic quaternion rate for body-frame angular velocity omega.
Quat quaternion_rate(const Quat& q, const Vec3& omega);

/// Total angular momentum in the platform frame (dimensionless units).
Vec3 angular_momentum_body(double tau, const Vec3& omega,
                           const SystemConfig& cfg);

/// Same vector expressed in the inertial frame; conserved along full-model
/// trajectories.
Vec3 angular_momentum_inertial(double tau, const Vec3& omega, const Quat& q,
                               const SystemConfig& cfg);

}  // namespace spinlab
