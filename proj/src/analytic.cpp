#include "spinlab/analytic.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "spinlab/dynamics.hpp"
#include "spinlab/error.hpp"

namespace spinlab {

namespace {

using CF = analytic_detail::ClosedForm<double>;

void require_lambda_usable(const DerivedParams& p) {
    if (p.stability != StabilityClass::MarginallyUnstable &&
        p.lambda_degenerate)
        throw RegimeError(
            "lambda is degenerate; closed-form amplitudes undefined");
}

void require_angles_defined(const DerivedParams& p) {
    if (p.stability == StabilityClass::ExponentiallyUnstable)
        throw RegimeError(
            "no closed-form Euler angles in the exponentially unstable "
            "regime");
    require_lambda_usable(p);
    if (p.stability == StabilityClass::Stable && p.resonant)
        throw RegimeError(
            "lambda ~ 1 resonance; closed-form Euler angles singular");
}

/// theta_y from d(theta_y)/dtau = w_y + theta_y w_z with the reconstructed
/// closed-form rates; fixed-step RK4.
double integrate_theta_y(const CF& f, double tau) {
    if (tau == 0.0) return 0.0;
    const auto nsteps =
        static_cast<std::size_t>(std::ceil(std::abs(tau) / 1e-3));
    const double h = tau / static_cast<double>(nsteps);
    auto rhs = [&f](double t, double ty) {
        const auto w = f.omega_physical(t);
        return w[1] + ty * w[2];
    };
    double ty = 0.0;
    for (std::size_t k = 0; k < nsteps; ++k) {
        const double t = static_cast<double>(k) * h;
        const double k1 = rhs(t, ty);
        const double k2 = rhs(t + 0.5 * h, ty + 0.5 * h * k1);
        const double k3 = rhs(t + 0.5 * h, ty + 0.5 * h * k2);
        const double k4 = rhs(t + h, ty + h * k3);
        ty += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return ty;
}

}  // namespace

Mat2 floquet_p(double tau) {
    const double c = std::cos(tau), s = std::sin(tau);
    return {c, s, -s, c};
}

FloquetFactors floquet_factors(const DerivedParams& p) {
    return {Mat2{0.0, p.u1, p.u2, 0.0}};
}

Mat2 stm(double tau, const DerivedParams& p) {
    const CF f = CF::from(p);
    double c, s;
    f.basis(tau, c, s);
    // exp(tau R) = cosl I + sinl R
    const Mat2 e{c, s * p.u1, s * p.u2, c};
    return floquet_p(tau) * e;
}

Vec3 omega_first_order(double tau, const DerivedParams& p) {
    require_lambda_usable(p);
    const auto w = CF::from(p).omega1(tau);
    return {w[0], w[1], w[2]};
}

Vec2 omega_semi_analytic(double tau, const DerivedParams& p) {
    if (tau == 0.0) return {0.0, 0.0};
    const CF f = CF::from(p);
    const Mat2 r{0.0, p.u1, p.u2, 0.0};

    auto phi_f = [&](double s) -> Vec2 {
        // Phi(tau, s) f(s) = P(tau) exp((tau - s) R) P(s)^-1 (sin s, cos s)
        double c, sl;
        f.basis(tau - s, c, sl);
        const Mat2 e = Mat2{c, 0.0, 0.0, c} + r * sl;
        const Mat2 phi = floquet_p(tau) * e * floquet_p(s).inverse();
        return phi * Vec2{std::sin(s), std::cos(s)};
    };

    using boost::math::quadrature::gauss_kronrod;
    Vec2 out;
    for (int comp = 0; comp < 2; ++comp) {
        double err = 0.0;
        const double v = gauss_kronrod<double, 61>::integrate(
            [&](double s) {
                const Vec2 g = phi_f(s);
                return comp == 0 ? g.x : g.y;
            },
            0.0, tau, 15, 1e-12, &err);
        if (!(err < 1e-10 * std::max(1.0, std::abs(v))))
            throw NumericalError(
                "forced-response quadrature did not converge (estimate " +
                std::to_string(err) + ")");
        (comp == 0 ? out.x : out.y) = v;
    }
    return out;
}

Vec3 omega_analytic(double tau, const DerivedParams& p) {
    require_lambda_usable(p);
    const auto w = CF::from(p).omega_physical(tau);
    return {w[0], w[1], w[2]};
}

Vec3 omega_analytic(double tau, const SystemConfig& cfg) {
    if (cfg.initial_omega.max_abs() != 0.0)
        throw ValidationError("initial_omega",
                              "closed forms assume a platform at rest");
    return omega_analytic(tau, derive_params(cfg));
}

Vec3 euler_angles_analytic(double tau, const DerivedParams& p) {
    require_angles_defined(p);
    const CF f = CF::from(p);
    const auto txz = f.theta_xz(tau);
    return {txz[0], integrate_theta_y(f, tau), txz[1]};
}

NutationProfile nutation_profile(const DerivedParams& p) {
    if (p.stability != StabilityClass::Stable)
        throw RegimeError("nutation profile defined for sigma < 0 only");
    if (p.resonant)
        throw RegimeError("lambda ~ 1 resonance; nutation profile singular");
    require_lambda_usable(p);

    const CF f = CF::from(p);
    NutationProfile out;
    out.theta_z0 = f.theta_z0();

    // The amplitude ratio is independent of gamma; evaluate the circle
    // coefficients with eps scaled to 1, then restore the physical scale.
    CF fn = f;
    fn.gamma = f.rate * f.rate;
    const auto [a0n, k1n, k2n] = fn.circle_coeffs();

    // A(tau) = k2 cos(2 lam tau) + k1 cos(lam tau) is 2pi-periodic in
    // x = lam tau; dense sampling resolves the two-tone extremum.
    constexpr int kSamples = 100001;
    double amax_n = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const double x = 2.0 * std::numbers::pi * static_cast<double>(i) /
                         (kSamples - 1);
        amax_n = std::max(amax_n,
                          std::abs(k2n * std::cos(2.0 * x) + k1n * std::cos(x)));
    }
    const double e2 = p.epsilon * p.epsilon;
    out.a0 = a0n * e2;
    out.a_max = amax_n * e2;
    out.eps_n = a0n > 0.0 ? std::sqrt(std::abs(amax_n / a0n)) : 0.0;
    const double lam = p.lambda;
    out.precession_freqs = {1.0 + lam, 1.0 - lam, 1.0};
    out.nutation_freqs = {lam, 2.0 * lam};
    return out;
}

Trajectory analytic_trajectory(const SystemConfig& cfg, double tau_end,
                               double dt) {
    if (!(dt > 0.0)) throw ValidationError("dt", "must be > 0");
    if (!(tau_end > 0.0)) throw ValidationError("tau_end", "must be > 0");
    if (cfg.initial_omega.max_abs() != 0.0)
        throw ValidationError("initial_omega",
                              "closed forms assume a platform at rest");
    const DerivedParams p = derive_params(cfg);
    require_lambda_usable(p);
    const CF f = CF::from(p);

    const auto nsteps = static_cast<std::size_t>(tau_end / dt + 1e-9);

    Trajectory traj;
    traj.dt = dt;
    traj.meta = {cfg, Model::Analytic, dt, static_cast<double>(nsteps) * dt};
    traj.samples.reserve(nsteps + 1);

    // attitude follows the closed-form rates through the kinematics
    std::array<double, 7> y{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};  // q, theta
    auto rhs = [&f](double t, std::span<const double> s,
                    std::span<double> d) {
        const auto wp = f.omega_physical(t);
        const Vec3 w{wp[0], wp[1], wp[2]};
        const Quat q{s[0], s[1], s[2], s[3]};
        const Quat qd = quaternion_rate(q, w);
        const Vec3 th{s[4], s[5], s[6]};
        const Vec3 thd = euler_rate(th, w);
        d[0] = qd.w;
        d[1] = qd.x;
        d[2] = qd.y;
        d[3] = qd.z;
        d[4] = thd.x;
        d[5] = thd.y;
        d[6] = thd.z;
    };

    std::array<double, 7> k1{}, k2{}, k3{}, k4{}, tmp{};
    auto emit = [&](double tau) {
        const auto wp = f.omega_physical(tau);
        BodyState s;
        s.tau = tau;
        s.omega = {wp[0], wp[1], wp[2]};
        s.quat = {y[0], y[1], y[2], y[3]};
        s.euler = {y[4], y[5], y[6]};
        traj.samples.push_back(s);
    };

    emit(0.0);
    for (std::size_t k = 0; k < nsteps; ++k) {
        const double t = static_cast<double>(k) * dt;
        detail::rk4_step(rhs, t, dt, std::span<double>(y),
                         std::span<double>(k1), std::span<double>(k2),
                         std::span<double>(k3), std::span<double>(k4),
                         std::span<double>(tmp));
        const double qn = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2] +
                                    y[3] * y[3]);
        y[0] /= qn;
        y[1] /= qn;
        y[2] /= qn;
        y[3] /= qn;
        emit(static_cast<double>(k + 1) * dt);
    }
    return traj;
}

}  // namespace spinlab
