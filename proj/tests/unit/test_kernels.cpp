#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "spinlab/kernels.hpp"

using namespace spinlab;

namespace {

std::vector<double> random_vec(std::mt19937& rng, std::size_t n, double lo,
                               double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

struct BackendGuard {
    kernels::Backend saved = kernels::active_backend();
    ~BackendGuard() { kernels::set_backend(saved); }
};

}  // namespace

TEST_CASE("scalar and simd backends agree") {
    if (!kernels::avx2_available()) {
        MESSAGE("avx2 not available on this host; dispatch test skipped");
        return;
    }
    BackendGuard guard;
    std::mt19937 rng(101);
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3},
                          std::size_t{4}, std::size_t{7}, std::size_t{8},
                          std::size_t{9}, std::size_t{31}, std::size_t{1000},
                          std::size_t{4097}}) {
        const auto a = random_vec(rng, n, -3.0, 3.0);
        const auto b = random_vec(rng, n, -3.0, 3.0);
        const auto c = random_vec(rng, n, -3.0, 3.0);
        const auto d = random_vec(rng, n, -3.0, 3.0);
        const auto e = random_vec(rng, n, -3.0, 3.0);
        const auto f = random_vec(rng, n, -3.0, 3.0);

        REQUIRE(kernels::set_backend(kernels::Backend::Scalar));
        const double s_sum = kernels::sum(a);
        const double s_dot = kernels::dot(a, b);
        const double s_ssd = kernels::sum_sq_diff(a, b);
        const double s_dev = kernels::sum_sq_dev(a, 0.25);
        const double s_max = kernels::max_abs(a);
        const double s_n3 = n ? kernels::sum_norm3_diff(a, b, c, d, e, f) : 0.0;
        const double s_m3 = n ? kernels::max_norm3(a, b, c) : 0.0;

        REQUIRE(kernels::set_backend(kernels::Backend::Avx2));
        const double tol = 1e-13 * (static_cast<double>(n) + 1.0);
        CHECK(kernels::sum(a) == doctest::Approx(s_sum).epsilon(tol));
        CHECK(kernels::dot(a, b) == doctest::Approx(s_dot).epsilon(tol));
        CHECK(kernels::sum_sq_diff(a, b) ==
              doctest::Approx(s_ssd).epsilon(tol));
        CHECK(kernels::sum_sq_dev(a, 0.25) ==
              doctest::Approx(s_dev).epsilon(tol));
        // max-type reductions compare identical values: exact
        CHECK(kernels::max_abs(a) == s_max);
        if (n) {
            CHECK(kernels::sum_norm3_diff(a, b, c, d, e, f) ==
                  doctest::Approx(s_n3).epsilon(tol));
            CHECK(kernels::max_norm3(a, b, c) ==
                  doctest::Approx(s_m3).epsilon(1e-15));

            const auto mm_simd = kernels::minmax_norm2_offset(a, b, 0.5, -0.25);
            REQUIRE(kernels::set_backend(kernels::Backend::Scalar));
            const auto mm_scalar =
                kernels::minmax_norm2_offset(a, b, 0.5, -0.25);
            CHECK(mm_simd.min == doctest::Approx(mm_scalar.min).epsilon(1e-15));
            CHECK(mm_simd.max == doctest::Approx(mm_scalar.max).epsilon(1e-15));
        }
    }
}

TEST_CASE("reductions match a long-double reference") {
    std::mt19937 rng(55);
    const auto a = random_vec(rng, 5000, -1.0, 1.0);
    const auto b = random_vec(rng, 5000, -1.0, 1.0);
    long double rs = 0.0L, rd = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        rs += a[i];
        rd += static_cast<long double>(a[i]) * b[i];
    }
    CHECK(kernels::sum(a) ==
          doctest::Approx(static_cast<double>(rs)).epsilon(1e-11));
    CHECK(kernels::dot(a, b) ==
          doctest::Approx(static_cast<double>(rd)).epsilon(1e-11));
}

TEST_CASE("minmax_norm2_offset brackets every sample") {
    std::mt19937 rng(77);
    const auto x = random_vec(rng, 333, -2.0, 2.0);
    const auto y = random_vec(rng, 333, -2.0, 2.0);
    const auto mm = kernels::minmax_norm2_offset(x, y, 0.1, 0.2);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = std::hypot(x[i] + 0.1, y[i] + 0.2);
        CHECK(r >= mm.min - 1e-15);
        CHECK(r <= mm.max + 1e-15);
    }
}

TEST_CASE("kernel argument validation") {
    const std::vector<double> a(4), b(5);
    CHECK_THROWS_AS(kernels::dot(a, b), std::invalid_argument);
    CHECK_THROWS_AS(kernels::minmax_norm2_offset({}, {}, 0.0, 0.0),
                    std::invalid_argument);
    CHECK(kernels::sum({}) == 0.0);
    CHECK(kernels::max_abs({}) == 0.0);
}
