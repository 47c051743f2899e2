#ifndef WSTARK_TYPES_HPP
#define WSTARK_TYPES_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wstark {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kPeriod = 2.0 * kPi; // lattice period d in scaled units

/// Wrap an angle to (-pi, pi].
inline double normalize_phase(double phi) {
    double w = std::remainder(phi, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

/// Physical configuration of the tilted bichromatic lattice,
/// V(x) = V0/2 [cos x + delta cos(2x + phi)] + F x, in units where
/// d = 2pi, hbar = m = 1 and energies are in units of 8 E_R.
struct LatticeParams {
    double V0 = 1.0;    ///< potential strength (fixed to 1 in production runs)
    double delta = 0.0; ///< relative modulation of the second harmonic
    double phi = 0.0;   ///< relative phase, stored in (-pi, pi]
    double F = 0.0;     ///< static field strength (> 0 for resonance solves)
    double g = 0.0;     ///< mean-field interaction strength (0 = linear)

    LatticeParams() = default;
    LatticeParams(double V0_, double delta_, double phi_, double F_, double g_ = 0.0)
        : V0(V0_), delta(delta_), phi(normalize_phase(phi_)), F(F_), g(g_) {}

    double inv_F() const { return 1.0 / F; }

    /// Throws std::invalid_argument when the configuration cannot define
    /// a resonance problem (F = 0 has no resonance ladder).
    void validate_for_resonances() const {
        if (!(V0 > 0.0))
            throw std::invalid_argument("LatticeParams: V0 must be positive, got " + std::to_string(V0));
        if (!(F > 0.0))
            throw std::invalid_argument("LatticeParams: F must be positive for resonance computations, got " +
                                        std::to_string(F));
    }
};

enum class KineticScheme {
    Spectral, ///< Fourier second derivative on the box (default)
    Stencil9, ///< 9-point central finite difference
    Stencil3, ///< 3-point central finite difference (tests, coarse checks)
};

inline std::string to_string(KineticScheme s) {
    switch (s) {
        case KineticScheme::Spectral: return "spectral";
        case KineticScheme::Stencil9: return "stencil9";
        case KineticScheme::Stencil3: return "stencil3";
    }
    return "?";
}

inline KineticScheme kinetic_scheme_from_string(const std::string& s) {
    if (s == "spectral") return KineticScheme::Spectral;
    if (s == "stencil9") return KineticScheme::Stencil9;
    if (s == "stencil3") return KineticScheme::Stencil3;
    throw std::invalid_argument("unknown kinetic scheme '" + s + "' (spectral|stencil9|stencil3)");
}

/// Spatial discretization and complex absorbing potential placement.
/// The box spans [ -2pi*periods_left, 2pi*periods_right ) with uniform
/// spacing 2pi / points_per_period; the CAP occupies cap_width periods
/// at the left (downhill) edge.
struct GridSpec {
    int periods_left = 12;
    int periods_right = 5;
    int points_per_period = 24;
    double cap_strength = 30.0; ///< eta >= 0
    int cap_width = 6;          ///< periods occupied by the CAP
    int cap_order = 2;          ///< exponent of the monomial CAP profile
    KineticScheme kinetic = KineticScheme::Spectral;

    int size() const { return points_per_period * (periods_left + periods_right); }
    double dx() const { return kPeriod / points_per_period; }
    double x_left() const { return -kPeriod * periods_left; }
    double x_right() const { return kPeriod * periods_right; }
    double x(int i) const { return x_left() + dx() * i; }
    double cap_onset() const { return x_left() + kPeriod * cap_width; }
    double cap_length() const { return kPeriod * cap_width; }

    void validate() const {
        if (periods_left < 1 || periods_right < 1)
            throw std::invalid_argument("GridSpec: periods_left and periods_right must be >= 1");
        if (points_per_period < 4)
            throw std::invalid_argument("GridSpec: points_per_period must be >= 4, got " +
                                        std::to_string(points_per_period));
        if (cap_width < 0 || cap_width > periods_left)
            throw std::invalid_argument("GridSpec: cap_width must satisfy 0 <= cap_width <= periods_left");
        if (cap_strength < 0.0)
            throw std::invalid_argument("GridSpec: cap_strength must be >= 0");
        if (cap_order < 1)
            throw std::invalid_argument("GridSpec: cap_order must be >= 1");
    }
};

} // namespace wstark

#endif
