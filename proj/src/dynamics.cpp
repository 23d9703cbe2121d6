#include "spinlab/dynamics.hpp"

#include <cmath>

#include "spinlab/error.hpp"

namespace spinlab {

namespace {

Mat3 constant_spin_inertia(const SpinInertia& s) {
    Mat3 c;
    c(0, 0) = s.ixx;
    c(0, 1) = s.ixy;
    c(1, 0) = s.ixy;
    c(1, 1) = s.iyy;
    c(2, 2) = s.izz;
    return c;
}

constexpr Vec3 kSpinAxis{0.0, 1.0, 0.0};

}  // namespace

Mat3 rotor_rotation(double tau) {
    const double c = std::cos(tau), s = std::sin(tau);
    Mat3 t;
    t(0, 0) = c;
    t(0, 2) = s;
    t(1, 1) = 1.0;
    t(2, 0) = -s;
    t(2, 2) = c;
    return t;
}

Mat3 rotor_rotation_rate(double tau) {
    const double c = std::cos(tau), s = std::sin(tau);
    Mat3 t;
    t(0, 0) = -s;
    t(0, 2) = c;
    t(2, 0) = -c;
    t(2, 2) = -s;
    return t;
}

SpinInertiaAt spin_inertia_at(double tau, const SpinInertia& spin) {
    const Mat3 c = constant_spin_inertia(spin);
    const Mat3 t = rotor_rotation(tau);
    const Mat3 td = rotor_rotation_rate(tau);

    SpinInertiaAt out;
    // T C T^T is symmetric; fill the upper triangle and mirror so the
    // stored matrix is symmetric to the last bit.
    const Mat3 full = t * c * t.transpose();
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            out.i1(i, j) = full(i, j);
            out.i1(j, i) = full(i, j);
        }
    // Tdot C T^T + (Tdot C T^T)^T
    const Mat3 half = td * c * t.transpose();
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            const double v = half(i, j) + half(j, i);
            out.i1dot(i, j) = v;
            out.i1dot(j, i) = v;
        }
    return out;
}

Mat3 platform_inertia_matrix(const PlatformInertia& platform) {
    return Mat3::diagonal(platform.ibr, platform.iby, platform.ibr);
}

Vec3 rhs_full(double tau, const Vec3& omega, const SystemConfig& cfg) {
    const auto [i1, i1dot] = spin_inertia_at(tau, cfg.spin);
    const Mat3 ib = platform_inertia_matrix(cfg.platform);
    const Mat3 i2 = i1 + ib;
    const Mat3 inv = i2.inverse();
    const double cond = i2.inf_norm() * inv.inf_norm();
    if (!(cond < kInertiaConditionLimit))
        throw NumericalError("equivalent inertia numerically singular "
                             "(condition estimate " + std::to_string(cond) +
                             ")");

    const Vec3 w_rel = omega + kSpinAxis;
    const Vec3 torque = i1dot * w_rel + omega.cross(i1 * w_rel) +
                        omega.cross(ib * omega);
    return -(inv * torque);
}

Vec3 rhs_first_order(double tau, const Vec3& w1, const DerivedParams& p) {
    const double s1 = std::sin(tau), c1t = std::cos(tau);
    const double s2 = std::sin(2.0 * tau), c2t = std::cos(2.0 * tau);
    const double ab = p.alpha + p.beta;

    Vec3 f;
    f.x = p.alpha * s2 * w1.x + (p.alpha * c2t + ab) * w1.z + s1;
    f.y = p.c1 * (2.0 * c2t * w1.x * w1.z + s2 * (w1.x * w1.x - w1.z * w1.z)) +
          p.c2 * (s1 * w1.x + c1t * w1.z);
    f.z = (p.alpha * c2t - ab) * w1.x - p.alpha * s2 * w1.z + c1t;
    return f;
}

Vec3 euler_rate(const Vec3& theta, const Vec3& omega) {
    return {omega.x, omega.y + theta.y * omega.z, omega.z};
}

Quat quaternion_rate(const Quat& q, const Vec3& omega) {
    return q * Quat{0.0, omega.x, omega.y, omega.z} * 0.5;
}

Vec3 angular_momentum_body(double tau, const Vec3& omega,
                           const SystemConfig& cfg) {
    const auto [i1, i1dot] = spin_inertia_at(tau, cfg.spin);
    (void)i1dot;
    const Mat3 ib = platform_inertia_matrix(cfg.platform);
    return ib * omega + i1 * (omega + kSpinAxis);
}

Vec3 angular_momentum_inertial(double tau, const Vec3& omega, const Quat& q,
                               const SystemConfig& cfg) {
    return q.rotate(angular_momentum_body(tau, omega, cfg));
}

}  // namespace spinlab
