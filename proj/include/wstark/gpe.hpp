#ifndef WSTARK_GPE_HPP
#define WSTARK_GPE_HPP

#include <vector>

#include "wstark/resonance.hpp"

namespace wstark {

struct NonlinearResonance {
    Complex mu;                 ///< chemical potential M - i Gamma/2
    Eigen::VectorXd density;    ///< |psi|^2, unit integral over the central period
    Eigen::VectorXcd right_vector;
    double g_used = 0.0;
    int iterations = 0;
    double residual = 0.0;      ///< final self-consistency change of mu
};

struct GpeOptions {
    double relaxation = 0.3; ///< under-relaxation of the density update
    double sc_tol = 1e-9;    ///< convergence on |mu_new - mu_old|
    int max_iterations = 500;
    double identity_threshold = 0.5; ///< min overlap with the previous iterate
    SolverOptions solver;
};

/// Self-consistent CAP resonance of the mean-field problem, seeded by a
/// converged linear resonance at the same (p without g, grid).
NonlinearResonance solve_nonlinear(const LatticeParams& p, const GridSpec& grid,
                                   const Resonance& seed, const GpeOptions& opts = {});

enum class CrossingType { TypeI, TypeII, Degenerate };

struct CrossingReport {
    double g = 0.0;
    double f_lo = 0.0, f_hi = 0.0;
    CrossingType type = CrossingType::Degenerate;
    double closest_approach_real = 0.0; ///< min |M1 - M2|
    double closest_approach_imag = 0.0; ///< min |Gamma1 - Gamma2|
};

struct CrossingThresholds {
    double degeneracy_tol = 1e-4; ///< both parts below this -> degenerate
};

/// Classify an identity-matched two-track scan (F ascending) as type I
/// (real parts avoid, imaginary parts cross), type II (converse), or
/// degenerate. Throws std::domain_error when neither part crosses.
CrossingReport classify_crossing(const std::vector<std::tuple<double, Complex, Complex>>& scan,
                                 const CrossingThresholds& thr = {});

/// Petermann factor of the converged nonlinear state against the frozen-
/// density linearized operator.
double nonlinear_petermann(const LatticeParams& p, const GridSpec& grid,
                           const NonlinearResonance& state);

} // namespace wstark

#endif
