#ifndef WSTARK_RESONANCE_HPP
#define WSTARK_RESONANCE_HPP

#include <array>
#include <vector>

#include "wstark/lattice.hpp"

namespace wstark {

/// One metastable eigenstate with complex energy E - i Gamma/2.
struct Resonance {
    double energy = 0.0; ///< real part E (units of 8 E_R)
    double gamma = 0.0;  ///< decay rate, eigenvalue = E - i gamma/2
    Eigen::VectorXcd right_vector; ///< c-normalized (v^T v = 1) unless near_defective
    int ladder_index = 0;          ///< miniladder label alpha >= 1; 0 = unassigned
    int site_index = 0;            ///< n = round(localization_center / 2pi)
    bool ladder_ambiguous = false; ///< set when two ladders both claim the state
    double cap_leakage = 0.0;      ///< fraction of |psi|^2 inside the CAP region
    double localization_center = 0.0; ///< Re(v^T X v / v^T v), tail-robust
    double peak_position = 0.0;       ///< argmax of |psi|^2
    double residual = 0.0;            ///< ||H v - mu v|| / ||v||
    bool near_defective = false;      ///< c-norm underflow guard triggered

    Complex eigenvalue() const { return Complex(energy, -0.5 * gamma); }
};

/// All physical resonances of one parameter point, gamma ascending.
struct SpectrumSlice {
    LatticeParams params;
    GridSpec grid;
    std::vector<Resonance> resonances;
    double eta_used = 0.0;
    bool ladders_labeled = false;
    /// Miniladder offsets (ladder 1, ladder 2) about their common mean,
    /// reduced to a common site; filled by label_ladders.
    std::array<double, 2> ladder_offsets{0.0, 0.0};
};

struct SolverOptions {
    int n_keep = 0;               ///< 0 = keep every physical state
    /// Max density fraction inside the CAP. Physical resonances with decay
    /// rates around 0.1-0.2 legitimately carry 10-20% of their norm in the
    /// absorber tail before it is quenched; the default rejects only states
    /// that live mostly inside the absorber.
    double leak_threshold = 0.35;
    double residual_tol = 1e-8;
    /// Reject above-barrier states: require E - F*x_peak < V0(1+|delta|)/2 + margin.
    double band_energy_margin = 0.5;
    double defective_tol = 1e-8; ///< two smallest-gamma eigenvalues closer -> flag
};

/// Dense non-hermitian solve + physicality filter + gamma sort.
/// Throws std::runtime_error when no physical state survives the filter.
SpectrumSlice solve_resonances(const LatticeParams& p, const GridSpec& grid,
                               int n_keep = 0, const SolverOptions& opts = {});

/// The two most stable resonances peaked in the central cell [-pi, pi).
/// Throws std::runtime_error when fewer than two are available.
std::array<Resonance, 2> central_pair(const SpectrumSlice& s);

struct CapSelection {
    double eta = 0.0;
    double flatness = 0.0; ///< |d log Gamma / d log eta| at the returned eta
};

/// Logarithmic eta scan; returns the plateau point of Gamma_1(eta).
/// Throws std::runtime_error when no plateau is found (flatness above threshold).
CapSelection select_cap_strength(const LatticeParams& p, const GridSpec& grid,
                                 double eta_min = 1.0, double eta_max = 300.0,
                                 int n_scan = 13, double flatness_threshold = 0.1);

/// Assign (alpha, n) labels by translation grouping and fill ladder_offsets.
SpectrumSlice label_ladders(SpectrumSlice s);

/// Hermitian overlap |<a|b>| of the 2-norm-normalized vectors, in [0, 1].
double overlap(const Resonance& a, const Resonance& b);
double overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// Petermann factor K = ||v||^4 / |v^T v|^2 >= 1; +inf sentinel near an EP.
double petermann(const Resonance& a);
double petermann(const Eigen::VectorXcd& v);

struct LandauZenerFit {
    double slope = 0.0;     ///< of log(Gamma/F) vs 1/F; compare to -pi*dE^2
    double intercept = 0.0;
    double residual = 0.0;  ///< rms deviation of the fit
    double expected_slope = 0.0; ///< -pi * delta_E^2
};

/// Least-squares fit of log(Gamma/F) against 1/F. Needs >= 5 samples.
LandauZenerFit fit_landau_zener(const std::vector<std::pair<double, double>>& gammas,
                                double delta_E);

/// Minimal direct gap between the two lowest Bloch bands at F = 0,
/// via plane-wave diagonalization over the Brillouin zone.
double bloch_gap(const LatticeParams& p, int n_k = 64, int n_plane_waves = 17);

} // namespace wstark

#endif
