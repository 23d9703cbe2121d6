#pragma once

#include "spinlab/model.hpp"

namespace spinlab::reference {

/// Bundled demonstration configurations used by the `reproduce` command and
/// the acceptance suite.  All inertias in kg m^2, |Omega| = 1 rad/s.

/// Near-symmetric rotor, weak unbalance; oscillatory regime.
inline SystemConfig example1() {
    return {{80.0, 80.0, 60.0, -0.1}, {100.0, 90.0}};
}

/// Deployed-truss rotor on a heavy platform; oscillatory regime.
inline SystemConfig example2() {
    return {{20.0, 60.0, 10.0, -1.0}, {1000.0, 800.0}};
}

/// Light rotor on a heavy platform; oscillatory regime with strong
/// precession-to-nutation contrast (the sweep anchor point).
inline SystemConfig nutation_demo() {
    return {{1.0, 2.0, 3.0, -0.01}, {100.0, 90.0}};
}

/// Marginal regime: the spin-axis inertia matches one augmented transverse
/// inertia exactly, so the transverse rates grow linearly.
inline SystemConfig marginal_demo() {
    return {{3.0, 102.0, 2.0, -0.01}, {100.0, 90.0}};
}

/// Exponentially unstable regime: the spin-axis inertia falls strictly
/// between the two augmented transverse inertias.
inline SystemConfig unstable_demo() {
    return {{1.0, 102.0, 3.0, -0.01}, {100.0, 90.0}};
}

}  // namespace spinlab::reference
