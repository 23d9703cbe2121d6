#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "spinlab/analysis.hpp"
#include "spinlab/analytic.hpp"
#include "spinlab/dynamics.hpp"
#include "spinlab/error.hpp"
#include "spinlab/integrate.hpp"
#include "spinlab/reference_configs.hpp"

using namespace spinlab;

namespace {

constexpr double kPi = std::numbers::pi;

/// RK4 integration of the first-order system; the independent oracle the
/// closed forms are held against.
Vec3 lptv_oracle(double tau_end, const DerivedParams& p, double dt = 1e-3) {
    double y[3] = {0.0, 0.0, 0.0};
    const auto n = static_cast<std::size_t>(tau_end / dt + 0.5);
    const double h = tau_end / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * h;
        const Vec3 s0{y[0], y[1], y[2]};
        const Vec3 k1 = rhs_first_order(t, s0, p);
        const Vec3 k2 = rhs_first_order(t + h / 2, s0 + k1 * (h / 2), p);
        const Vec3 k3 = rhs_first_order(t + h / 2, s0 + k2 * (h / 2), p);
        const Vec3 k4 = rhs_first_order(t + h, s0 + k3 * h, p);
        const Vec3 dy = (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        y[0] += dy.x;
        y[1] += dy.y;
        y[2] += dy.z;
    }
    return {y[0], y[1], y[2]};
}

/// Fundamental matrix of the homogeneous x-z system by matrix-ODE
/// integration (columns propagated independently).
Mat2 fundamental_oracle(double tau_end, const DerivedParams& p,
                        double dt = 2e-4) {
    auto amat = [&p](double t) {
        const double s2 = std::sin(2.0 * t), c2 = std::cos(2.0 * t);
        const double ab = p.alpha + p.beta;
        return Mat2{p.alpha * s2, p.alpha * c2 + ab, p.alpha * c2 - ab,
                    -p.alpha * s2};
    };
    Mat2 phi = Mat2::identity();
    const auto n = static_cast<std::size_t>(tau_end / dt + 0.5);
    const double h = tau_end / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * h;
        const Mat2 k1 = amat(t) * phi;
        const Mat2 k2 = amat(t + h / 2) * (phi + k1 * (h / 2));
        const Mat2 k3 = amat(t + h / 2) * (phi + k2 * (h / 2));
        const Mat2 k4 = amat(t + h) * (phi + k3 * h);
        phi = phi + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    return phi;
}

/// Independent matrix exponential: scaling and squaring with a Taylor core.
Mat2 expm_oracle(Mat2 m) {
    int squarings = 0;
    while (m.max_abs() > 0.25) {
        m = m * 0.5;
        ++squarings;
    }
    Mat2 sum = Mat2::identity();
    Mat2 term = Mat2::identity();
    for (int k = 1; k <= 20; ++k) {
        term = term * m * (1.0 / k);
        sum = sum + term;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

DerivedParams marginal_with(double gamma, double u1, double u2, double c1,
                            double c2) {
    DerivedParams p;
    p.gamma = gamma;
    p.u1 = u1;
    p.u2 = u2;
    p.c1 = c1;
    p.c2 = c2;
    p.alpha = (u1 + u2) / 2.0;
    p.beta = 1.0 - u2;
    p.sigma = 0.0;
    p.lambda = std::sqrt(std::abs(u1 * u2));
    p.lambda_degenerate = true;
    p.ixx_aug = 1.0;
    p.izz_aug = 1.0;
    p.stability = StabilityClass::MarginallyUnstable;
    return p;
}

}  // namespace

TEST_CASE("floquet factors") {
    const Mat2 p0 = floquet_p(0.0);
    CHECK(p0.a == 1.0);
    CHECK(p0.b == 0.0);
    const Mat2 p2pi = floquet_p(2.0 * kPi);
    CHECK(p2pi.a == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(p2pi.b) < 1e-15);

    const DerivedParams p = derive_params(reference::nutation_demo());
    const FloquetFactors f = floquet_factors(p);
    CHECK(f.r.a == 0.0);
    CHECK(f.r.d == 0.0);
    CHECK(f.r.b == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK(f.r.c == doctest::Approx(0.96117).epsilon(1e-5));
    // eigenvalues are +-sqrt(u1 u2): trace zero, det -u1 u2
    CHECK(f.r.det() == doctest::Approx(-p.u1 * p.u2).epsilon(1e-14));
}

TEST_CASE("stm is the identity at tau = 0 and solves the matrix ODE") {
    const std::array<SystemConfig, 3> cfgs{reference::nutation_demo(),
                                           reference::marginal_demo(),
                                           reference::unstable_demo()};
    for (const auto& cfg : cfgs) {
        const DerivedParams p = derive_params(cfg);
        const Mat2 i = stm(0.0, p);
        CHECK(i.a == 1.0);
        CHECK(i.b == 0.0);
        CHECK(i.c == 0.0);
        CHECK(i.d == 1.0);
        for (double tau : {1.0, 5.0, 20.0}) {
            const Mat2 oracle = fundamental_oracle(tau, p);
            const Mat2 got = stm(tau, p);
            CHECK(std::abs(got.a - oracle.a) < 1e-8);
            CHECK(std::abs(got.b - oracle.b) < 1e-8);
            CHECK(std::abs(got.c - oracle.c) < 1e-8);
            CHECK(std::abs(got.d - oracle.d) < 1e-8);
        }
    }
}

TEST_CASE("stm has unit determinant in the oscillatory regime") {
    const DerivedParams p = derive_params(reference::example1());
    for (double tau = 0.0; tau <= 30.0; tau += 0.7)
        CHECK(stm(tau, p).det() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stm equals P exp(tau R) against an independent exponential") {
    for (const auto& cfg : {reference::example1(), reference::marginal_demo(),
                            reference::unstable_demo()}) {
        const DerivedParams p = derive_params(cfg);
        const Mat2 r{0.0, p.u1, p.u2, 0.0};
        for (double tau = 0.5; tau <= 20.0; tau += 1.3) {
            const Mat2 expect = floquet_p(tau) * expm_oracle(r * tau);
            const Mat2 got = stm(tau, p);
            CHECK(std::abs(got.a - expect.a) < 1e-10);
            CHECK(std::abs(got.b - expect.b) < 1e-10);
            CHECK(std::abs(got.c - expect.c) < 1e-10);
            CHECK(std::abs(got.d - expect.d) < 1e-10);
        }
    }
}

TEST_CASE("omega_first_order starts from rest in every regime") {
    for (const auto& cfg : {reference::nutation_demo(),
                            reference::marginal_demo(),
                            reference::unstable_demo()}) {
        const Vec3 w = omega_first_order(0.0, derive_params(cfg));
        CHECK(w.x == 0.0);
        CHECK(w.y == 0.0);
        CHECK(w.z == 0.0);
    }
}

TEST_CASE("omega_first_order marginal closed form") {
    // synthetic marginal parameters with the forced c2 of the worked example
    const DerivedParams p = marginal_with(-0.01, 0.0, 0.0098, -0.0026, -0.5);
    const Vec3 got = omega_first_order(2.0, p);
    // against the integration oracle
    const Vec3 oracle = lptv_oracle(2.0, p, 2e-4);
    CHECK(got.x == doctest::Approx(oracle.x).epsilon(1e-10));
    CHECK(got.y == doctest::Approx(oracle.y).epsilon(1e-10));
    CHECK(got.z == doctest::Approx(oracle.z).epsilon(1e-10));
    // frozen oracle values: (tau sin tau, c2 tau^2 / 2, tau cos tau)
    CHECK(got.x == doctest::Approx(1.8185949).epsilon(1e-7));
    CHECK(got.y == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(got.z == doctest::Approx(-0.8322937).epsilon(1e-7));
}

TEST_CASE("omega_first_order matches the integration oracle per regime") {
    for (const auto& cfg : {reference::nutation_demo(), reference::example1(),
                            reference::marginal_demo(),
                            reference::unstable_demo()}) {
        const DerivedParams p = derive_params(cfg);
        for (double tau : {kPi, 10.0, 40.0}) {
            const Vec3 oracle = lptv_oracle(tau, p);
            const Vec3 got = omega_first_order(tau, p);
            const double scale = std::max(
                {1.0, std::abs(oracle.x), std::abs(oracle.y),
                 std::abs(oracle.z)});
            CHECK(std::abs(got.x - oracle.x) < 1e-6 * scale);
            CHECK(std::abs(got.y - oracle.y) < 1e-6 * scale);
            CHECK(std::abs(got.z - oracle.z) < 1e-6 * scale);
        }
    }
}

TEST_CASE("omega_semi_analytic agrees with oracle and closed form") {
    for (const auto& cfg : {reference::nutation_demo(), reference::example1(),
                            reference::marginal_demo(),
                            reference::unstable_demo()}) {
        const DerivedParams p = derive_params(cfg);
        const Vec2 zero = omega_semi_analytic(0.0, p);
        CHECK(zero.x == 0.0);
        CHECK(zero.y == 0.0);
        for (double tau : {1.0, 10.0, 50.0}) {
            const Vec2 semi = omega_semi_analytic(tau, p);
            const Vec3 oracle = lptv_oracle(tau, p);
            const double scale =
                std::max({1.0, std::abs(oracle.x), std::abs(oracle.z)});
            CHECK(std::abs(semi.x - oracle.x) < 1e-8 * scale);
            CHECK(std::abs(semi.y - oracle.z) < 1e-8 * scale);
            const Vec3 closed = omega_first_order(tau, p);
            CHECK(std::abs(semi.x - closed.x) < 1e-8 * scale);
            CHECK(std::abs(semi.y - closed.z) < 1e-8 * scale);
        }
    }
}

TEST_CASE("omega_analytic: balanced case and amplitude law") {
    SystemConfig balanced = reference::example1();
    balanced.spin.ixy = 0.0;
    const Vec3 w = omega_analytic(7.7, derive_params(balanced));
    CHECK(w.x == 0.0);
    CHECK(w.y == 0.0);
    CHECK(w.z == 0.0);

    // peak transverse closed-form amplitude: 2 |u1| eps at slow-phase pi,
    // reached up to fast-phase alignment over the window
    const DerivedParams p = derive_params(reference::example1());
    double peak = 0.0;
    for (double tau = 0.0; tau <= 100.0; tau += 0.005)
        peak = std::max(peak, std::abs(omega_analytic(tau, p).x));
    const double amp = 2.0 * std::abs(p.u1) * std::abs(p.epsilon);
    CHECK(peak <= amp * 1.0001);
    CHECK(peak >= amp * 0.85);
    // of the order of |eps|
    CHECK(peak > 0.5 * std::abs(p.epsilon));
    CHECK(peak < 2.0 * std::abs(p.epsilon));
}

TEST_CASE("omega_analytic tracks the full model on example 2") {
    const SystemConfig cfg = reference::example2();
    const Trajectory full = propagate(cfg, Model::Full, 100.0, 1e-3);
    const Trajectory ana = analytic_trajectory(cfg, 100.0, 1e-3);
    const ErrorReport rep = error_report(full, ana);
    CHECK(rep.mre < 0.005);
}

TEST_CASE("unstable closed form grows at the Floquet rate") {
    const DerivedParams p = derive_params(reference::unstable_demo());
    const double lp = p.lambda;
    // block maxima of the transverse norm on lambda' tau in [5, 7]
    std::vector<double> ts, logm;
    for (double t0 = 5.0 / lp; t0 + 2.0 * kPi <= 7.0 / lp; t0 += 2.0 * kPi) {
        double m = 0.0;
        for (double t = t0; t <= t0 + 2.0 * kPi; t += 0.01) {
            const Vec3 w = omega_first_order(t, p);
            m = std::max(m, std::hypot(w.x, w.z));
        }
        ts.push_back(t0 + kPi);
        logm.push_back(std::log(m));
    }
    REQUIRE(ts.size() >= 10);
    const auto n = static_cast<double>(ts.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mx += ts[i];
        my += logm[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sxx += (ts[i] - mx) * (ts[i] - mx);
        sxy += (ts[i] - mx) * (logm[i] - my);
    }
    const double slope = sxy / sxx;
    CHECK(std::abs(slope - lp) / lp < 0.02);
}

TEST_CASE("euler_angles_analytic at tau = 0") {
    const Vec3 th =
        euler_angles_analytic(0.0, derive_params(reference::example1()));
    CHECK(th.x == 0.0);
    CHECK(th.y == 0.0);
    CHECK(th.z == 0.0);
}

TEST_CASE("euler_angles_analytic marginal closed form") {
    const DerivedParams p = marginal_with(-0.01, 0.0, 0.0098, -0.0026, -0.53);
    const Vec3 th = euler_angles_analytic(kPi, p);
    // theta_x = gamma (sin - tau cos) -> gamma*pi; theta_z = gamma (tau sin
    // + cos - 1) -> -2 gamma.  Cross-checked by quadrature below.
    CHECK(th.x == doctest::Approx(-0.01 * kPi).epsilon(1e-12));
    CHECK(th.z == doctest::Approx(0.02).epsilon(1e-12));

    // kinematics-quadrature oracle for the same parameters
    double tx = 0.0, tz = 0.0;
    const double h = 1e-4;
    const auto n = static_cast<std::size_t>(kPi / h);
    auto cf = analytic_detail::ClosedForm<double>::from(p);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * h;
        // Simpson step on the x and z rates
        const auto a = cf.omega_physical(t);
        const auto b = cf.omega_physical(t + h / 2);
        const auto c = cf.omega_physical(t + h);
        tx += h / 6.0 * (a[0] + 4.0 * b[0] + c[0]);
        tz += h / 6.0 * (a[2] + 4.0 * b[2] + c[2]);
    }
    const double rem = kPi - static_cast<double>(n) * h;
    if (rem > 0) {
        const auto a = cf.omega_physical(static_cast<double>(n) * h);
        const auto b =
            cf.omega_physical(static_cast<double>(n) * h + rem / 2);
        const auto c = cf.omega_physical(kPi);
        tx += rem / 6.0 * (a[0] + 4.0 * b[0] + c[0]);
        tz += rem / 6.0 * (a[2] + 4.0 * b[2] + c[2]);
    }
    CHECK(th.x == doctest::Approx(tx).epsilon(1e-9));
    CHECK(th.z == doctest::Approx(tz).epsilon(1e-9));
}

TEST_CASE("euler_angles_analytic matches the kinematics quadrature") {
    const DerivedParams p = derive_params(reference::nutation_demo());
    // integrate the full small-angle kinematics driven by the closed-form
    // rates, as an independent oracle for all three angles
    Vec3 th{};
    const double h = 1e-3;
    double t = 0.0;
    for (double target : {5.0, 12.0, 30.0}) {
        while (t < target - h / 2) {
            auto rate = [&p](double tt, const Vec3& v) {
                return euler_rate(v, omega_analytic(tt, p));
            };
            const Vec3 k1 = rate(t, th);
            const Vec3 k2 = rate(t + h / 2, th + k1 * (h / 2));
            const Vec3 k3 = rate(t + h / 2, th + k2 * (h / 2));
            const Vec3 k4 = rate(t + h, th + k3 * h);
            th = th + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            t += h;
        }
        const Vec3 closed = euler_angles_analytic(t, p);
        CHECK(std::abs(closed.x - th.x) < 1e-6);
        CHECK(std::abs(closed.y - th.y) < 1e-6);
        CHECK(std::abs(closed.z - th.z) < 1e-6);
    }
}

TEST_CASE("euler_angles_analytic regime guards") {
    CHECK_THROWS_AS(
        euler_angles_analytic(1.0, derive_params(reference::unstable_demo())),
        RegimeError);
    DerivedParams resonant = derive_params(reference::example1());
    resonant.resonant = true;
    CHECK_THROWS_AS(euler_angles_analytic(1.0, resonant), RegimeError);
}

TEST_CASE("circle identity of the closed-form angles in extended precision") {
    const DerivedParams p = derive_params(reference::nutation_demo());
    const auto cf = analytic_detail::ClosedForm<long double>::from(p);
    const auto [a0, k1, k2] = cf.circle_coeffs();
    const long double tz0 = cf.theta_z0();
    const long double lam = cf.rate;
    const double eps2 = p.epsilon * p.epsilon;
    long double worst = 0.0L;
    for (double tau = 0.0; tau <= 60.0; tau += 0.03) {
        const auto [tx, tz] = cf.theta_xz(static_cast<long double>(tau));
        const long double r2 =
            a0 + k2 * cosl(2.0L * lam * tau) + k1 * cosl(lam * tau);
        const long double res = tx * tx + (tz + tz0) * (tz + tz0) - r2;
        worst = std::max(worst, fabsl(res));
    }
    CHECK(static_cast<double>(worst) < 1e-12 * eps2);
}

TEST_CASE("nutation_profile on the demo configuration") {
    const DerivedParams p = derive_params(reference::nutation_demo());
    const NutationProfile prof = nutation_profile(p);
    CHECK(std::abs(prof.theta_z0 - (-0.005)) < 1e-16);
    CHECK(std::sqrt(prof.a0) == doctest::Approx(5.10151e-3).epsilon(1e-5));
    CHECK(prof.eps_n == doctest::Approx(0.19948).epsilon(1e-4));
    CHECK(prof.precession_freqs[0] ==
          doctest::Approx(1.9803903).epsilon(1e-6));
    CHECK(prof.precession_freqs[1] ==
          doctest::Approx(0.0196097).epsilon(1e-4));
    CHECK(prof.precession_freqs[2] == 1.0);
    CHECK(prof.nutation_freqs[0] == doctest::Approx(p.lambda));
    CHECK(prof.nutation_freqs[1] == doctest::Approx(2.0 * p.lambda));
}

TEST_CASE("nutation radius modulation loses its slow tone when u1 = rate^2") {
    DerivedParams p;
    p.u1 = 0.25;
    p.u2 = -1.0;
    p.gamma = 1e-4;
    p.lambda = 0.5;
    p.epsilon = p.gamma / (p.lambda * p.lambda);
    p.stability = StabilityClass::Stable;
    const auto cf = analytic_detail::ClosedForm<double>::from(p);
    const auto [a0, k1, k2] = cf.circle_coeffs();
    CHECK(std::abs(k1) < 1e-20);
    CHECK(a0 > 0.0);
}

TEST_CASE("nutation_profile regime guards") {
    CHECK_THROWS_AS(nutation_profile(derive_params(reference::marginal_demo())),
                    RegimeError);
    CHECK_THROWS_AS(nutation_profile(derive_params(reference::unstable_demo())),
                    RegimeError);
}

TEST_CASE("analytic_trajectory is consistent with the closed-form angles") {
    const SystemConfig cfg = reference::nutation_demo();
    const Trajectory t = analytic_trajectory(cfg, 30.0, 1e-3);
    CHECK(t.size() == 30001);
    const DerivedParams p = derive_params(cfg);
    for (std::size_t k = 0; k < t.size(); k += 3000) {
        const Vec3 closed = euler_angles_analytic(t.samples[k].tau, p);
        CHECK(std::abs(t.samples[k].euler.x - closed.x) < 1e-6);
        CHECK(std::abs(t.samples[k].euler.z - closed.z) < 1e-6);
    }
}

TEST_CASE("analytic evaluation requires a platform at rest") {
    SystemConfig cfg = reference::example1();
    cfg.initial_omega = {1e-3, 0.0, 0.0};
    CHECK_THROWS_AS(omega_analytic(1.0, cfg), ValidationError);
    CHECK_THROWS_AS(analytic_trajectory(cfg, 1.0, 1e-3), ValidationError);
}
