#include "spinlab/model.hpp"

#include <cmath>

#include "spinlab/error.hpp"

namespace spinlab {

namespace {

void require(bool ok, const char* field, const char* what) {
    if (!ok) throw ValidationError(field, what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void SpinInertia::validate() const {
    require(finite(ixx) && ixx > 0.0, "ixx", "must be finite and > 0");
    require(finite(iyy) && iyy > 0.0, "iyy", "must be finite and > 0");
    require(finite(izz) && izz > 0.0, "izz", "must be finite and > 0");
    require(finite(ixy), "ixy", "must be finite");
    // positive-definiteness of the upper 2x2 block
    require(ixy * ixy < ixx * iyy, "ixy",
            "violates positive-definiteness (ixy^2 >= ixx*iyy)");
}

void PlatformInertia::validate() const {
    require(finite(ibr) && ibr > 0.0, "ibr", "must be finite and > 0");
    require(finite(iby) && iby > 0.0, "iby", "must be finite and > 0");
}

void RotorPhysical::validate() const {
    require(finite(m_a) && m_a > 0.0, "m_a", "must be finite and > 0");
    require(finite(m_b) && m_b > 0.0, "m_b", "must be finite and > 0");
    require(finite(h) && h >= 0.0, "h", "must be finite and >= 0");
    require(finite(d) && d >= 0.0, "d", "must be finite and >= 0");
    require(finite(ia_xx) && ia_xx > 0.0, "ia_xx", "must be finite and > 0");
    require(finite(ia_yy) && ia_yy > 0.0, "ia_yy", "must be finite and > 0");
    require(finite(ia_zz) && ia_zz > 0.0, "ia_zz", "must be finite and > 0");
}

void SystemConfig::validate() const {
    spin.validate();
    platform.validate();
    require(finite(omega_mag) && omega_mag > 0.0, "omega_mag",
            "must be finite and > 0");
    require(finite(initial_omega.x) && finite(initial_omega.y) &&
                finite(initial_omega.z),
            "initial_omega", "must be finite");
}

const char* to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::Stable: return "Stable";
        case StabilityClass::MarginallyUnstable: return "MarginallyUnstable";
        case StabilityClass::ExponentiallyUnstable:
            return "ExponentiallyUnstable";
    }
    return "?";
}

SpinInertia compose_equivalent_inertia(const RotorPhysical& phys) {
    phys.validate();
    const double mu = phys.m_a * phys.m_b / (phys.m_a + phys.m_b);
    SpinInertia s;
    s.ixx = phys.ia_xx + mu * phys.h * phys.h;
    s.iyy = phys.ia_yy + mu * phys.d * phys.d;
    s.izz = phys.ia_zz + mu * (phys.d * phys.d + phys.h * phys.h);
    s.ixy = -mu * phys.d * phys.h;
    s.validate();
    return s;
}

DerivedParams derive_params(const SystemConfig& cfg) {
    cfg.validate();
    const double ixx = cfg.spin.ixx, iyy = cfg.spin.iyy, izz = cfg.spin.izz;
    const double ixy = cfg.spin.ixy;
    const double ibr = cfg.platform.ibr, iby = cfg.platform.iby;

    DerivedParams p;
    p.ixx_aug = ixx + ibr;
    p.izz_aug = izz + ibr;
    p.gamma = ixy / (ibr + izz);
    p.alpha = (ixx - izz) * (ixx - iyy + 2.0 * ibr + izz) /
              (2.0 * (ibr + izz) * (ixx + ibr));
    p.beta = -(ixx - iyy - izz) / (ibr + izz);
    p.c1 = -(ixx - izz) / (2.0 * (iby + iyy));
    p.c2 = -((izz + ibr) * (ixx + iyy - izz)) / ((iby + iyy) * (ixx + ibr));
    p.u1 = 2.0 * p.alpha + p.beta - 1.0;
    p.u2 = 1.0 - p.beta;
    p.sigma = -(iyy - p.ixx_aug) * (iyy - p.izz_aug);
    p.lambda = std::sqrt(std::abs(p.u1 * p.u2));
    p.lambda_degenerate = p.lambda * p.lambda < 1e-9;
    p.resonant = std::abs(p.lambda - 1.0) < 1e-6;
    p.epsilon = p.lambda_degenerate ? 0.0 : p.gamma / (p.lambda * p.lambda);
    p.stability = classify_stability(p);
    return p;
}

StabilityClass classify_stability(const DerivedParams& p) {
    const double tol = p.sigma_tolerance();
    if (p.sigma < -tol) return StabilityClass::Stable;
    if (p.sigma > tol) return StabilityClass::ExponentiallyUnstable;
    return StabilityClass::MarginallyUnstable;
}

}  // namespace spinlab
