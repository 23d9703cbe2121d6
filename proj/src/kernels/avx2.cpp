// AVX2 + FMA variants of the reduction kernels.  Four-lane double vectors,
// scalar tail.  This file is only built on x86-64 and is compiled with
// -mavx2 -mfma; dispatch.cpp guards execution behind a CPUID check.

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <limits>

#include "ops.hpp"

namespace spinlab::kernels::detail {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmin(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_min_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_min_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d abs_pd(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(
        0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double r = hsum(acc);
    for (; i < n; ++i) r += x[i];
    return r;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                              acc);
    double r = hsum(acc);
    for (; i < n; ++i) r += a[i] * b[i];
    return r;
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        r += d * d;
    }
    return r;
}

double sum_sq_dev_avx2(const double* x, double center, std::size_t n) {
    const __m256d c = _mm256_set1_pd(center);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) {
        const double d = x[i] - center;
        r += d * d;
    }
    return r;
}

double max_abs_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
    double r = hmax(acc);
    for (; i < n; ++i) r = std::max(r, std::abs(x[i]));
    return r;
}

double sum_norm3_diff_avx2(const double* ax, const double* ay, const double* az,
                           const double* bx, const double* by, const double* bz,
                           std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx =
            _mm256_sub_pd(_mm256_loadu_pd(ax + i), _mm256_loadu_pd(bx + i));
        const __m256d dy =
            _mm256_sub_pd(_mm256_loadu_pd(ay + i), _mm256_loadu_pd(by + i));
        const __m256d dz =
            _mm256_sub_pd(_mm256_loadu_pd(az + i), _mm256_loadu_pd(bz + i));
        __m256d q = _mm256_mul_pd(dx, dx);
        q = _mm256_fmadd_pd(dy, dy, q);
        q = _mm256_fmadd_pd(dz, dz, q);
        acc = _mm256_add_pd(acc, _mm256_sqrt_pd(q));
    }
    double r = hsum(acc);
    for (; i < n; ++i) {
        const double dx = ax[i] - bx[i];
        const double dy = ay[i] - by[i];
        const double dz = az[i] - bz[i];
        r += std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    return r;
}

double max_norm3_avx2(const double* x, const double* y, const double* z,
                      std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        const __m256d vz = _mm256_loadu_pd(z + i);
        __m256d q = _mm256_mul_pd(vx, vx);
        q = _mm256_fmadd_pd(vy, vy, q);
        q = _mm256_fmadd_pd(vz, vz, q);
        acc = _mm256_max_pd(acc, q);
    }
    double r = hmax(acc);
    for (; i < n; ++i) {
        const double q = x[i] * x[i] + y[i] * y[i] + z[i] * z[i];
        r = std::max(r, q);
    }
    return std::sqrt(r);
}

MinMax minmax_norm2_offset_avx2(const double* x, const double* y, double ox,
                                double oy, std::size_t n) {
    const __m256d vox = _mm256_set1_pd(ox);
    const __m256d voy = _mm256_set1_pd(oy);
    __m256d vmin = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256d vmax = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_add_pd(_mm256_loadu_pd(x + i), vox);
        const __m256d dy = _mm256_add_pd(_mm256_loadu_pd(y + i), voy);
        const __m256d q = _mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dx, dx));
        vmin = _mm256_min_pd(vmin, q);
        vmax = _mm256_max_pd(vmax, q);
    }
    double lo = hmin(vmin);
    double hi = hmax(vmax);
    for (; i < n; ++i) {
        const double dx = x[i] + ox;
        const double dy = y[i] + oy;
        const double q = dx * dx + dy * dy;
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    return {std::sqrt(lo), std::sqrt(hi)};
}

}  // namespace

const Ops avx2_ops = {
    sum_avx2,          dot_avx2,      sum_sq_diff_avx2,
    sum_sq_dev_avx2,   max_abs_avx2,  sum_norm3_diff_avx2,
    max_norm3_avx2,    minmax_norm2_offset_avx2,
};

}  // namespace spinlab::kernels::detail
