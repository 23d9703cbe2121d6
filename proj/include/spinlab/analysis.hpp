#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "spinlab/integrate.hpp"

namespace spinlab {

struct Window {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
};

/// Trajectory comparison metrics over the angular-velocity triple.
///
/// MRE is the mean Euclidean deviation normalized by the peak Euclidean
/// norm of the reference inside the window (the reference passes through
/// zero periodically, so samplewise relative errors would blow up).
/// R^2 is pooled across the three components about the reference mean;
/// per-component values are kept for diagnostics.
struct ErrorReport {
    double mre = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double r2 = 1.0;
    std::array<double, 3> r2_components{1.0, 1.0, 1.0};
    bool r2_defined = true;
    std::size_t n_samples = 0;
    Window window;
};

ErrorReport error_report(const Trajectory& reference, const Trajectory& test,
                         Window window = {});

enum class GrowthKind { Bounded, Linear, Exponential, Indeterminate };

const char* to_string(GrowthKind k);

struct GrowthFit {
    GrowthKind kind = GrowthKind::Indeterminate;
    double slope = 0.0;      // Linear: envelope slope per tau
    double rate = 0.0;       // Exponential: log-envelope slope per tau
    double r_squared = 0.0;  // fit quality of the winning model
    std::size_t n_peaks = 0;
};

/// Classifies the growth of ||(w_x, w_z)|| from per-window envelope peaks
/// (block maxima over consecutive 2*pi windows).  Throws when fewer than
/// 10 peaks are available.
GrowthFit growth_envelope(const Trajectory& traj);

/// Largest envelope value on the trailing window [tau - 2*pi, tau].
double envelope_at(const Trajectory& traj, double tau);

/// Top-k periodogram peaks (Hann window, parabolic interpolation) of a
/// uniformly sampled series; angular frequencies, strongest first.
/// Needs at least 2048 samples.
std::vector<double> dominant_frequencies(std::span<const double> series,
                                         double dt, std::size_t k);

struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 1;

    double value(std::size_t j) const {
        return n < 2 ? lo
                     : lo + (hi - lo) * static_cast<double>(j) /
                               static_cast<double>(n - 1);
    }
};

struct SweepGrid {
    GridAxis ixx_aug;
    GridAxis iyy;
    GridAxis izz_aug;
    double gamma = -1e-4;
};

struct SweepRow {
    double ixx_aug = 0.0;
    double iyy = 0.0;
    double izz_aug = 0.0;
    double sigma = 0.0;
    double lambda = 0.0;
    double eps_n = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // stable grid points, grid-index order
    std::size_t skipped = 0;     // non-stable (or resonant) points
};

/// Relative nutation amplitude over a grid of augmented inertias at fixed
/// gamma.  Points outside the oscillatory regime are counted and omitted.
/// Throws GridError when the grid is malformed or no point is stable.
SweepResult nutation_sweep(const SweepGrid& grid);

}  // namespace spinlab
