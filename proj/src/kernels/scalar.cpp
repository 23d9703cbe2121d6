#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "ops.hpp"

// Straight-line reference kernels.  These define the semantics the SIMD
// variants are tested against.

namespace spinlab::kernels::detail {

namespace {

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double sum_sq_dev_scalar(const double* x, double center, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - center;
        acc += d * d;
    }
    return acc;
}

double max_abs_scalar(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

double sum_norm3_diff_scalar(const double* ax, const double* ay,
                             const double* az, const double* bx,
                             const double* by, const double* bz,
                             std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = ax[i] - bx[i];
        const double dy = ay[i] - by[i];
        const double dz = az[i] - bz[i];
        acc += std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    return acc;
}

double max_norm3_scalar(const double* x, const double* y, const double* z,
                        std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = x[i] * x[i] + y[i] * y[i] + z[i] * z[i];
        m = std::max(m, v);
    }
    return std::sqrt(m);
}

MinMax minmax_norm2_offset_scalar(const double* x, const double* y, double ox,
                                  double oy, std::size_t n) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] + ox;
        const double dy = y[i] + oy;
        const double v = dx * dx + dy * dy;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {std::sqrt(lo), std::sqrt(hi)};
}

}  // namespace

const Ops scalar_ops = {
    sum_scalar,          dot_scalar,      sum_sq_diff_scalar,
    sum_sq_dev_scalar,   max_abs_scalar,  sum_norm3_diff_scalar,
    max_norm3_scalar,    minmax_norm2_offset_scalar,
};

}  // namespace spinlab::kernels::detail
