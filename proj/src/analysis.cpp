#include "spinlab/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <optional>
#include <thread>

#include "spinlab/analytic.hpp"
#include "spinlab/error.hpp"
#include "spinlab/kernels.hpp"

namespace spinlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Soa3 {
    std::vector<double> x, y, z;
};

Soa3 extract_omega(const Trajectory& t, std::size_t lo, std::size_t hi) {
    Soa3 s;
    s.x.reserve(hi - lo);
    s.y.reserve(hi - lo);
    s.z.reserve(hi - lo);
    for (std::size_t k = lo; k < hi; ++k) {
        s.x.push_back(t.samples[k].omega.x);
        s.y.push_back(t.samples[k].omega.y);
        s.z.push_back(t.samples[k].omega.z);
    }
    return s;
}

double component_r2(std::span<const double> ref, std::span<const double> test,
                    bool& defined) {
    const auto n = static_cast<double>(ref.size());
    const double mean = kernels::sum(ref) / n;
    const double ss_tot = kernels::sum_sq_dev(ref, mean);
    const double ss_res = kernels::sum_sq_diff(ref, test);
    if (ss_tot <= 0.0) {
        defined = ss_res <= 0.0;
        return defined ? 1.0 : std::numeric_limits<double>::quiet_NaN();
    }
    defined = true;
    return 1.0 - ss_res / ss_tot;
}

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    const double mx = kernels::sum(x) / n;
    const double my = kernels::sum(y) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LineFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    f.r_squared = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 0.0;
    return f;
}

/// Least squares y ~ a x through the origin; R^2 about the mean of y.
LineFit fit_line_origin(std::span<const double> x, std::span<const double> y) {
    const double sxx = kernels::dot(x, x);
    const double sxy = kernels::dot(x, y);
    LineFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    const auto n = static_cast<double>(y.size());
    const double my = kernels::sum(y) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - f.slope * x[i];
        const double d = y[i] - my;
        ss_res += r * r;
        ss_tot += d * d;
    }
    f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    return f;
}

}  // namespace

ErrorReport error_report(const Trajectory& reference, const Trajectory& test,
                         Window window) {
    if (std::abs(reference.dt - test.dt) >
        1e-12 * std::max(reference.dt, test.dt))
        throw ValidationError("dt", "trajectories sampled at different rates");
    const std::size_t n = std::min(reference.size(), test.size());
    for (std::size_t k : {std::size_t{0}, n / 2, n - 1}) {
        if (n > 0 && std::abs(reference.samples[k].tau - test.samples[k].tau) >
                         1e-9 * std::max(1.0, reference.samples[k].tau))
            throw ValidationError("samples", "trajectory grids not aligned");
    }

    std::size_t lo = 0;
    while (lo < n && reference.samples[lo].tau < window.lo) ++lo;
    std::size_t hi = n;
    while (hi > lo && reference.samples[hi - 1].tau > window.hi) --hi;
    if (hi - lo < 2)
        throw ValidationError("window", "fewer than two aligned samples");

    const Soa3 ref = extract_omega(reference, lo, hi);
    const Soa3 tst = extract_omega(test, lo, hi);
    const auto count = static_cast<double>(hi - lo);

    ErrorReport rep;
    rep.window = window;
    rep.n_samples = hi - lo;

    const double ssx = kernels::sum_sq_diff(ref.x, tst.x);
    const double ssy = kernels::sum_sq_diff(ref.y, tst.y);
    const double ssz = kernels::sum_sq_diff(ref.z, tst.z);
    rep.mse = (ssx + ssy + ssz) / (3.0 * count);
    rep.rmse = std::sqrt(rep.mse);

    const double mean_dev =
        kernels::sum_norm3_diff(ref.x, ref.y, ref.z, tst.x, tst.y, tst.z) /
        count;
    const double peak = kernels::max_norm3(ref.x, ref.y, ref.z);
    rep.mre = peak > 0.0 ? mean_dev / peak
                         : (mean_dev > 0.0
                                ? std::numeric_limits<double>::infinity()
                                : 0.0);

    // pooled R^2 about the per-component reference means
    double ss_res = 0.0, ss_tot = 0.0;
    const std::array<std::span<const double>, 3> rc{ref.x, ref.y, ref.z};
    const std::array<std::span<const double>, 3> tc{tst.x, tst.y, tst.z};
    for (int c = 0; c < 3; ++c) {
        const double mean = kernels::sum(rc[c]) / count;
        ss_tot += kernels::sum_sq_dev(rc[c], mean);
        ss_res += kernels::sum_sq_diff(rc[c], tc[c]);
        bool defined = true;
        rep.r2_components[c] = component_r2(rc[c], tc[c], defined);
    }
    if (ss_tot <= 0.0) {
        rep.r2_defined = ss_res <= 0.0;
        rep.r2 = rep.r2_defined ? 1.0
                                : std::numeric_limits<double>::quiet_NaN();
    } else {
        rep.r2 = 1.0 - ss_res / ss_tot;
    }
    return rep;
}

const char* to_string(GrowthKind k) {
    switch (k) {
        case GrowthKind::Bounded: return "Bounded";
        case GrowthKind::Linear: return "Linear";
        case GrowthKind::Exponential: return "Exponential";
        case GrowthKind::Indeterminate: return "Indeterminate";
    }
    return "?";
}

GrowthFit growth_envelope(const Trajectory& traj) {
    // block maxima of the transverse rate norm over consecutive 2*pi windows
    std::vector<double> tau_k, peak_k;
    const double span_tau =
        traj.samples.empty() ? 0.0 : traj.samples.back().tau;
    const auto nblocks = static_cast<std::size_t>(span_tau / kTwoPi);
    if (nblocks < 10)
        throw ValidationError("trajectory",
                              "insufficient peaks: need at least 10 envelope "
                              "windows (tau span >= 20*pi)");
    tau_k.reserve(nblocks);
    peak_k.reserve(nblocks);
    std::size_t i = 0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        const double hi = static_cast<double>(b + 1) * kTwoPi;
        double m = 0.0;
        while (i < traj.size() && traj.samples[i].tau <= hi) {
            const auto& w = traj.samples[i].omega;
            m = std::max(m, std::hypot(w.x, w.z));
            ++i;
        }
        tau_k.push_back(hi - std::numbers::pi);
        peak_k.push_back(m);
    }

    GrowthFit fit;
    fit.n_peaks = nblocks;

    const double peak_max = *std::max_element(peak_k.begin(), peak_k.end());
    if (peak_max <= 0.0) {
        fit.kind = GrowthKind::Bounded;
        fit.r_squared = 1.0;
        return fit;
    }

    // bounded: the free-slope trend moves the envelope by < 15% of its peak
    const LineFit trend = fit_line(tau_k, peak_k);
    const double travel =
        std::abs(trend.slope) * (tau_k.back() - tau_k.front());
    if (travel < 0.15 * peak_max) {
        fit.kind = GrowthKind::Bounded;
        fit.slope = trend.slope;
        fit.r_squared = trend.r_squared;
        return fit;
    }

    // linear through the origin over all blocks
    const LineFit lin = fit_line_origin(tau_k, peak_k);
    if (lin.r_squared > 0.99) {
        fit.kind = GrowthKind::Linear;
        fit.slope = lin.slope;
        fit.r_squared = lin.r_squared;
        return fit;
    }

    // exponential: log-envelope slope over the trailing half, where the
    // growing Floquet mode dominates the transient
    const std::size_t half = nblocks / 2;
    std::vector<double> lt(tau_k.begin() + half, tau_k.end());
    std::vector<double> lp;
    lp.reserve(nblocks - half);
    for (std::size_t b = half; b < nblocks; ++b) {
        if (peak_k[b] <= 0.0) {
            fit.kind = GrowthKind::Indeterminate;
            return fit;
        }
        lp.push_back(std::log(peak_k[b]));
    }
    const LineFit expf = fit_line(lt, lp);
    if (expf.r_squared > 0.99 && expf.slope > 0.0) {
        fit.kind = GrowthKind::Exponential;
        fit.rate = expf.slope;
        fit.r_squared = expf.r_squared;
        return fit;
    }

    fit.kind = GrowthKind::Indeterminate;
    fit.r_squared = std::max(lin.r_squared, expf.r_squared);
    return fit;
}

double envelope_at(const Trajectory& traj, double tau) {
    double m = 0.0;
    for (const auto& s : traj.samples) {
        if (s.tau > tau) break;
        if (s.tau >= tau - kTwoPi)
            m = std::max(m, std::hypot(s.omega.x, s.omega.z));
    }
    return m;
}

std::vector<double> dominant_frequencies(std::span<const double> series,
                                         double dt, std::size_t k) {
    const std::size_t n = series.size();
    if (n < 2048)
        throw ValidationError("series",
                              "too short: need at least 2048 samples");
    if (!(dt > 0.0)) throw ValidationError("dt", "must be > 0");

    // Hann-windowed periodogram; the near-DC precession tone would drown
    // in rectangular-window leakage otherwise.
    std::vector<double> buf(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w =
            0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) /
                                 static_cast<double>(n - 1));
        buf[i] = series[i] * w;
    }

    std::vector<double> spec(n / 2 + 1);
    {
        std::vector<fftw_complex> out(n / 2 + 1);
        fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf.data(),
                                              out.data(), FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
        for (std::size_t i = 0; i < spec.size(); ++i)
            spec[i] = std::hypot(out[i][0], out[i][1]);
    }

    struct Peak {
        std::size_t bin;
        double mag;
    };
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < spec.size(); ++i) {
        if (spec[i] > spec[i - 1] && spec[i] >= spec[i + 1])
            peaks.push_back({i, spec[i]});
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.mag > b.mag; });

    const double bin_width = kTwoPi / (static_cast<double>(n) * dt);
    std::vector<double> freqs;
    freqs.reserve(std::min(k, peaks.size()));
    for (std::size_t j = 0; j < peaks.size() && freqs.size() < k; ++j) {
        const std::size_t b = peaks[j].bin;
        // parabolic interpolation on the log magnitude
        const double la = std::log(std::max(spec[b - 1], 1e-300));
        const double lb = std::log(std::max(spec[b], 1e-300));
        const double lc = std::log(std::max(spec[b + 1], 1e-300));
        const double denom = la - 2.0 * lb + lc;
        const double delta = denom != 0.0 ? 0.5 * (la - lc) / denom : 0.0;
        freqs.push_back((static_cast<double>(b) + delta) * bin_width);
    }
    return freqs;
}

SweepResult nutation_sweep(const SweepGrid& grid) {
    for (const auto& [axis, name] :
         {std::pair{grid.ixx_aug, "ixx_aug"}, std::pair{grid.iyy, "iyy"},
          std::pair{grid.izz_aug, "izz_aug"}}) {
        if (axis.n == 0) throw GridError(std::string(name) + ": empty axis");
        if (axis.lo > axis.hi)
            throw GridError(std::string(name) + ": min exceeds max");
        if (!(axis.lo > 0.0))
            throw GridError(std::string(name) + ": must be > 0");
    }

    const std::size_t total = grid.ixx_aug.n * grid.iyy.n * grid.izz_aug.n;

    auto eval_cell = [&grid](std::size_t idx) -> std::optional<SweepRow> {
        const std::size_t l = idx % grid.izz_aug.n;
        const std::size_t j = (idx / grid.izz_aug.n) % grid.iyy.n;
        const std::size_t i = idx / (grid.izz_aug.n * grid.iyy.n);
        const double ia = grid.ixx_aug.value(i);
        const double yy = grid.iyy.value(j);
        const double ca = grid.izz_aug.value(l);

        // synthesize a config with the requested augmented inertias; the
        // platform split does not change u1, u2, or gamma
        SystemConfig cfg;
        cfg.platform.ibr = 0.5 * std::min(ia, ca);
        cfg.platform.iby = yy;
        cfg.spin.ixx = ia - cfg.platform.ibr;
        cfg.spin.izz = ca - cfg.platform.ibr;
        cfg.spin.iyy = yy;
        cfg.spin.ixy = grid.gamma * ca;

        DerivedParams p;
        try {
            p = derive_params(cfg);
        } catch (const ValidationError&) {
            return std::nullopt;
        }
        if (p.stability != StabilityClass::Stable || p.resonant ||
            p.lambda_degenerate)
            return std::nullopt;
        const NutationProfile prof = nutation_profile(p);
        return SweepRow{ia, yy, ca, p.sigma, p.lambda, prof.eps_n};
    };

    // cells are independent; fan out, then collect in grid-index order
    std::vector<std::optional<SweepRow>> cells(total);
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(
                                     std::thread::hardware_concurrency(), 8));
    const std::size_t chunk = (total + workers - 1) / workers;
    std::vector<std::future<void>> tasks;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        tasks.push_back(std::async(std::launch::async, [&, lo, hi] {
            for (std::size_t idx = lo; idx < hi; ++idx)
                cells[idx] = eval_cell(idx);
        }));
    }
    for (auto& t : tasks) t.get();

    SweepResult out;
    for (auto& c : cells) {
        if (c)
            out.rows.push_back(*c);
        else
            ++out.skipped;
    }
    if (out.rows.empty()) throw GridError("empty stable subset");
    return out;
}

}  // namespace spinlab
