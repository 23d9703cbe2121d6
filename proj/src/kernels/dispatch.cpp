#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "ops.hpp"

namespace spinlab::kernels {

namespace detail {

namespace {

bool cpu_has_avx2() {
#if defined(SPINLAB_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend resolve_default() {
    if (const char* env = std::getenv("SPINLAB_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2())
            return Backend::Avx2;
        // anything else (including "auto") falls through to detection
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& backend_slot() {
    static std::atomic<Backend> slot{resolve_default()};
    return slot;
}

}  // namespace

const Ops& active_ops() {
#if defined(SPINLAB_HAVE_AVX2)
    if (backend_slot().load(std::memory_order_relaxed) == Backend::Avx2)
        return avx2_ops;
#endif
    return scalar_ops;
}

}  // namespace detail

Backend active_backend() { return detail::backend_slot().load(); }

bool avx2_available() { return detail::cpu_has_avx2(); }

bool set_backend(Backend b) {
    if (b == Backend::Avx2 && !avx2_available()) return false;
    detail::backend_slot().store(b);
    return true;
}

std::string backend_name(Backend b) {
    return b == Backend::Avx2 ? "avx2" : "scalar";
}

namespace {

void check_equal_size(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("kernel span lengths differ");
}

}  // namespace

double sum(std::span<const double> x) {
    return detail::active_ops().sum(x.data(), x.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
    check_equal_size(a.size(), b.size());
    return detail::active_ops().dot(a.data(), b.data(), a.size());
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    check_equal_size(a.size(), b.size());
    return detail::active_ops().sum_sq_diff(a.data(), b.data(), a.size());
}

double sum_sq_dev(std::span<const double> x, double center) {
    return detail::active_ops().sum_sq_dev(x.data(), center, x.size());
}

double max_abs(std::span<const double> x) {
    return detail::active_ops().max_abs(x.data(), x.size());
}

double sum_norm3_diff(std::span<const double> ax, std::span<const double> ay,
                      std::span<const double> az, std::span<const double> bx,
                      std::span<const double> by, std::span<const double> bz) {
    check_equal_size(ax.size(), ay.size());
    check_equal_size(ax.size(), az.size());
    check_equal_size(ax.size(), bx.size());
    check_equal_size(ax.size(), by.size());
    check_equal_size(ax.size(), bz.size());
    return detail::active_ops().sum_norm3_diff(ax.data(), ay.data(), az.data(),
                                               bx.data(), by.data(), bz.data(),
                                               ax.size());
}

double max_norm3(std::span<const double> x, std::span<const double> y,
                 std::span<const double> z) {
    check_equal_size(x.size(), y.size());
    check_equal_size(x.size(), z.size());
    return detail::active_ops().max_norm3(x.data(), y.data(), z.data(),
                                          x.size());
}

MinMax minmax_norm2_offset(std::span<const double> x,
                           std::span<const double> y, double ox, double oy) {
    check_equal_size(x.size(), y.size());
    if (x.empty()) throw std::invalid_argument("minmax over empty span");
    return detail::active_ops().minmax_norm2_offset(x.data(), y.data(), ox, oy,
                                                    x.size());
}

}  // namespace spinlab::kernels
