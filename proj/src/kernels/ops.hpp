#pragma once

#include <cstddef>

#include "spinlab/kernels.hpp"

namespace spinlab::kernels::detail {

struct Ops {
    double (*sum)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum_sq_diff)(const double*, const double*, std::size_t);
    double (*sum_sq_dev)(const double*, double, std::size_t);
    double (*max_abs)(const double*, std::size_t);
    double (*sum_norm3_diff)(const double*, const double*, const double*,
                             const double*, const double*, const double*,
                             std::size_t);
    double (*max_norm3)(const double*, const double*, const double*,
                        std::size_t);
    MinMax (*minmax_norm2_offset)(const double*, const double*, double, double,
                                  std::size_t);
};

extern const Ops scalar_ops;
#if defined(SPINLAB_HAVE_AVX2)
extern const Ops avx2_ops;
#endif

const Ops& active_ops();

}  // namespace spinlab::kernels::detail
