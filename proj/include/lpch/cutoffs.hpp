#pragma once

#include <cmath>

namespace lpch {

/// exp(-1/t) for t > 0, else 0. The classical smooth bump ingredient.
inline double smooth_exp(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }

/// Smooth monotone step: 0 for t <= 0, 1 for t >= 1.
inline double smooth_step(double t) {
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    const double a = smooth_exp(t);
    return a / (a + smooth_exp(1.0 - t));
}

/// Radial low-pass/annulus pair (chi, psi) generating the dyadic partition
///   chi(rho) + sum_{j>=0} psi(2^-j rho) = 1,   1/2 <= chi^2 + sum psi^2 <= 1.
///
/// chi equals 1 on [0, 3/4] and 0 on [4/3, inf); psi(rho) = chi(rho/2) - chi(rho),
/// so supp psi is inside [3/4, 8/3] and psi == 1 on [4/3, 3/2].
///
/// The transition of chi is squeezed into (17/18, 23/24). That makes psi == 1 on
/// the wider plateau [23/24, 17/9], which covers every normalized frequency band
/// the lacunary profiles occupy at lacunarity k = 2 -- the modulated bumps at
/// (17/12)(2^{kn} +- 2^{km}) with bump halfwidth 5/12 scale into
/// [23/24, 1.881] -- so each profile sits in exactly one dyadic block on the
/// lattice instead of leaking O(1) mass into neighbors. A transition on the
/// full (3/4, 4/3) shoulder only achieves that for k >= 5.
struct CutoffPair {
    double ramp_lo = 17.0 / 18.0;
    double ramp_hi = 23.0 / 24.0;

    double chi(double rho) const {
        if (rho <= ramp_lo) return 1.0;
        if (rho >= ramp_hi) return 0.0;
        return 1.0 - smooth_step((rho - ramp_lo) / (ramp_hi - ramp_lo));
    }

    double psi(double rho) const { return chi(0.5 * rho) - chi(rho); }
};

inline CutoffPair build_cutoffs() { return CutoffPair{}; }

} // namespace lpch
