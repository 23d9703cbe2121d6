#pragma once

#include "spinlab/geom.hpp"

namespace spinlab {

/// Constant-basis elements of the equivalent spin inertia tensor, expressed
/// in the rotor-attached frame.  The x-y product of inertia is what couples
/// the rotor spin into the platform; everything else stays diagonal.
struct SpinInertia {
    double ixx = 0.0;  // kg m^2
    double iyy = 0.0;  // kg m^2
    double izz = 0.0;  // kg m^2
    double ixy = 0.0;  // kg m^2, product of inertia

    void validate() const;
};

struct PlatformInertia {
    double ibr = 0.0;  // transverse platform inertia, kg m^2
    double iby = 0.0;  // spin-axis platform inertia, kg m^2

    void validate() const;
};

/// Physical rotor data used to compose the equivalent spin inertia:
/// rotor/platform masses, the rotor mass-center offsets, and the rotor's
/// own principal moments.
struct RotorPhysical {
    double m_a = 0.0;    // rotor mass, kg
    double m_b = 0.0;    // platform mass, kg
    double h = 0.0;      // rotor mass-center offset from the spin axis, m
    double d = 0.0;      // platform mass-center offset from the spin plane, m
    double ia_xx = 0.0;  // rotor principal moments, kg m^2
    double ia_yy = 0.0;
    double ia_zz = 0.0;

    void validate() const;
};

struct SystemConfig {
    SpinInertia spin;
    PlatformInertia platform;
    double omega_mag = 1.0;  // rotor relative rate |Omega|, rad/s
    Vec3 initial_omega{};    // dimensionless platform rate at tau = 0

    void validate() const;
};

enum class StabilityClass { Stable, MarginallyUnstable, ExponentiallyUnstable };

const char* to_string(StabilityClass c);

/// All scalar coefficients of the reduced x-z system plus the stability
/// classification.  `lambda` is the non-negative oscillation rate when
/// sigma < 0, the growth rate when sigma > 0, and 0 in the marginal case;
/// the regime is carried separately in `stability`.
struct DerivedParams {
    double gamma = 0.0;    // perturbation scale ixy / (ibr + izz)
    double alpha = 0.0;
    double beta = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double u1 = 0.0;       // off-diagonal Floquet entries
    double u2 = 0.0;
    double sigma = 0.0;    // stability discriminant, kg^2 m^4
    double lambda = 0.0;   // sqrt(|u1 u2|)
    double epsilon = 0.0;  // first-order x/z amplitude gamma / lambda^2
    double ixx_aug = 0.0;  // ixx + ibr
    double izz_aug = 0.0;  // izz + ibr
    bool lambda_degenerate = false;  // lambda^2 < 1e-9, amplitudes undefined
    bool resonant = false;           // |lambda - 1| < 1e-6, angle forms singular
    StabilityClass stability = StabilityClass::Stable;

    /// Tolerance used for the sigma = 0 decision.
    double sigma_tolerance() const { return 1e-12 * ixx_aug * izz_aug; }
};

/// Composes the equivalent spin inertia from physical rotor data using the
/// reduced two-body mass mu = mA mB / (mA + mB) and the mass-center offsets.
SpinInertia compose_equivalent_inertia(const RotorPhysical& phys);

DerivedParams derive_params(const SystemConfig& cfg);

StabilityClass classify_stability(const DerivedParams& p);

}  // namespace spinlab
