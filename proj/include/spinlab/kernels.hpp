#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace spinlab::kernels {

/// Reduction kernels used by the trajectory-analysis paths.  A scalar
/// reference implementation always exists; on x86-64 an AVX2+FMA variant is
/// selected at runtime when the CPU supports it.  The two variants are
/// equivalence-tested; results may differ by reassociation roundoff only.
enum class Backend { Scalar, Avx2 };

Backend active_backend();

/// Force a backend (for tests).  Returns false if unavailable on this host.
bool set_backend(Backend b);

/// True if the AVX2 variant was compiled in and the CPU supports it.
bool avx2_available();

std::string backend_name(Backend b);

double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);

/// sum_i (a_i - b_i)^2
double sum_sq_diff(std::span<const double> a, std::span<const double> b);

/// sum_i (x_i - center)^2
double sum_sq_dev(std::span<const double> x, double center);

double max_abs(std::span<const double> x);

/// sum_i sqrt((ax-bx)^2 + (ay-by)^2 + (az-bz)^2), componentwise spans.
double sum_norm3_diff(std::span<const double> ax, std::span<const double> ay,
                      std::span<const double> az, std::span<const double> bx,
                      std::span<const double> by, std::span<const double> bz);

/// max_i sqrt(x^2 + y^2 + z^2)
double max_norm3(std::span<const double> x, std::span<const double> y,
                 std::span<const double> z);

struct MinMax {
    double min = 0.0;
    double max = 0.0;
};

/// min/max over i of sqrt((x_i + ox)^2 + (y_i + oy)^2); n must be > 0.
MinMax minmax_norm2_offset(std::span<const double> x,
                           std::span<const double> y, double ox, double oy);

}  // namespace spinlab::kernels
