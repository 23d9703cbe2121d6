#pragma once

#include <array>
#include <cmath>

#include "spinlab/geom.hpp"
#include "spinlab/integrate.hpp"
#include "spinlab/model.hpp"

namespace spinlab {

/// Periodic Floquet factor of the x-z subsystem: a rotation through -tau.
Mat2 floquet_p(double tau);

struct FloquetFactors {
    Mat2 r;  // constant factor [[0, u1], [u2, 0]]
    Mat2 p(double tau) const { return floquet_p(tau); }
};

FloquetFactors floquet_factors(const DerivedParams& p);

/// State transition matrix Phi(tau, 0) = P(tau) exp(tau R) of the
/// homogeneous x-z system, valid in all three regimes.
Mat2 stm(double tau, const DerivedParams& p);

/// Closed-form first-order angular velocity (zero initial state).
Vec3 omega_first_order(double tau, const DerivedParams& p);

/// Forced-response convolution of the x-z subsystem evaluated by adaptive
/// Gauss-Kronrod quadrature; the arbiter the closed forms are checked
/// against.
Vec2 omega_semi_analytic(double tau, const DerivedParams& p);

/// Physical angular velocity reconstructed from the first-order solution.
Vec3 omega_analytic(double tau, const DerivedParams& p);
Vec3 omega_analytic(double tau, const SystemConfig& cfg);

/// Closed-form small angles (theta_x, theta_z) plus theta_y obtained by
/// integrating the reconstructed rates through the small-angle kinematics.
/// Defined for the oscillatory and marginal regimes away from resonance.
Vec3 euler_angles_analytic(double tau, const DerivedParams& p);

struct NutationProfile {
    double theta_z0 = 0.0;  // precession center offset, rad
    double a0 = 0.0;        // squared mean precession radius, rad^2
    double a_max = 0.0;     // max |A(tau)| over one period, rad^2
    double eps_n = 0.0;     // relative nutation amplitude
    std::array<double, 3> precession_freqs{};  // {1+lambda, 1-lambda, 1}
    std::array<double, 2> nutation_freqs{};    // {lambda, 2 lambda}
};

/// Precession/nutation geometry of the oscillatory regime: the angles trace
/// a circle of slowly varying radius about (0, -theta_z0).
NutationProfile nutation_profile(const DerivedParams& p);

/// Trajectory sampled from the closed-form angular velocity, with attitude
/// and Euler angles co-integrated through the kinematics.
Trajectory analytic_trajectory(const SystemConfig& cfg, double tau_end,
                               double dt);

namespace analytic_detail {

/// Closed-form evaluation core, templated on the scalar type so identity
/// checks can run in extended precision.
///
/// With R = [[0, u1], [u2, 0]] and R^2 = (u1 u2) I, the matrix exponential
/// reduces to exp(uR) = cosl(u) I + sinl(u) R where (cosl, sinl) are the
/// circular, linear, or hyperbolic pair picked by the sign of u1 u2.  The
/// forced response with zero initial state is
///   (w_x, w_z) = P(tau) (u1 C2(tau), S(tau)),
///   w_y        = c1 u1 C2(tau)^2 + c2 C2(tau),
/// with S = sinl and C2(u) = (1 - cosl(u)) / |u1 u2| its antiderivative
/// pair.  Angles follow by direct integration.
template <class Real>
struct ClosedForm {
    Real u1{}, u2{}, c1{}, c2{}, gamma{};
    int regime = -1;  // sign of sigma: -1 oscillatory, 0 marginal, +1 hyperbolic
    Real rate{};      // sqrt(|u1 u2|)

    static ClosedForm from(const DerivedParams& p) {
        ClosedForm f;
        f.u1 = static_cast<Real>(p.u1);
        f.u2 = static_cast<Real>(p.u2);
        f.c1 = static_cast<Real>(p.c1);
        f.c2 = static_cast<Real>(p.c2);
        f.gamma = static_cast<Real>(p.gamma);
        switch (p.stability) {
            case StabilityClass::Stable: f.regime = -1; break;
            case StabilityClass::MarginallyUnstable: f.regime = 0; break;
            case StabilityClass::ExponentiallyUnstable: f.regime = 1; break;
        }
        f.rate = std::sqrt(std::abs(f.u1 * f.u2));
        return f;
    }

    void basis(Real u, Real& cosl, Real& sinl) const {
        if (regime < 0) {
            cosl = std::cos(rate * u);
            sinl = std::sin(rate * u) / rate;
        } else if (regime > 0) {
            cosl = std::cosh(rate * u);
            sinl = std::sinh(rate * u) / rate;
        } else {
            cosl = Real(1);
            sinl = u;
        }
    }

    Real S(Real u) const {
        Real c, s;
        basis(u, c, s);
        return s;
    }

    Real C2(Real u) const {
        Real c, s;
        basis(u, c, s);
        if (regime == 0) return u * u / Real(2);
        // (1 - cos)/rate^2 continues to (cosh - 1)/rate^2
        return (Real(1) - c) / (regime < 0 ? rate * rate : -(rate * rate));
    }

    std::array<Real, 3> omega1(Real tau) const {
        Real c, s;
        basis(tau, c, s);
        const Real c2v =
            regime == 0 ? tau * tau / Real(2)
                        : (Real(1) - c) /
                              (regime < 0 ? rate * rate : -(rate * rate));
        const Real g1 = u1 * c2v;
        const Real ct = std::cos(tau), st = std::sin(tau);
        return {ct * g1 + st * s, c1 * u1 * c2v * c2v + c2 * c2v,
                -st * g1 + ct * s};
    }

    std::array<Real, 3> omega_physical(Real tau) const {
        const auto w1 = omega1(tau);
        return {gamma * w1[0], gamma * gamma * w1[1], gamma * w1[2]};
    }

    Real theta_z0() const {
        if (regime == 0) return gamma;  // u1 = 0 branch of the marginal case
        const Real lam2 = (regime < 0 ? Real(1) : Real(-1)) * rate * rate;
        return gamma * (u1 - Real(1)) / (lam2 - Real(1));
    }

    /// (theta_x, theta_z); oscillatory and marginal regimes only.
    std::array<Real, 2> theta_xz(Real tau) const {
        const Real st = std::sin(tau), ct = std::cos(tau);
        if (regime == 0) {
            // exact integral of the marginal-regime rates (general u1)
            const Real t2 = tau * tau;
            const Real tx =
                gamma * (u1 / Real(2) * (t2 * st - Real(2) * st +
                                         Real(2) * tau * ct) +
                         (st - tau * ct));
            const Real tz =
                gamma * (-u1 / Real(2) * (-t2 * ct + Real(2) * ct +
                                          Real(2) * tau * st - Real(2)) +
                         (ct + tau * st - Real(1)));
            return {tx, tz};
        }
        const Real lam = rate;
        const Real lam2 = lam * lam;
        const Real eps = gamma / lam2;
        const Real sl = std::sin(lam * tau), cl = std::cos(lam * tau);
        const Real k = eps / (lam2 - Real(1));
        const Real tx = k * ((u1 - lam2) * st * cl -
                             lam * (u1 - Real(1)) * ct * sl +
                             u1 * (lam2 - Real(1)) * st);
        const Real tz = k * ((u1 - lam2) * ct * cl +
                             lam * (u1 - Real(1)) * st * sl +
                             u1 * (lam2 - Real(1)) * ct -
                             (u1 - Real(1)) * lam2);
        return {tx, tz};
    }

    /// Radius-squared decomposition r^2(tau) = a0 + k2 cos(2 lam tau)
    ///                                        + k1 cos(lam tau).
    /// Returns {a0, k1, k2}; oscillatory regime only.
    std::array<Real, 3> circle_coeffs() const {
        const Real lam = rate;
        const Real lam2 = lam * lam;
        const Real eps = gamma / lam2;
        const Real a = (u1 - lam2) * eps / (lam2 - Real(1));
        const Real b = lam * (u1 - Real(1)) * eps / (lam2 - Real(1));
        const Real c = u1 * eps;
        const Real a0 = (a * a + b * b) / Real(2) + c * c;
        const Real k1 = Real(2) * a * c;
        const Real k2 = (a * a - b * b) / Real(2);
        return {a0, k1, k2};
    }
};

}  // namespace analytic_detail

}  // namespace spinlab
