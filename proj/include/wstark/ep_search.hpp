#ifndef WSTARK_EP_SEARCH_HPP
#define WSTARK_EP_SEARCH_HPP

#include <optional>
#include <vector>

#include "wstark/resonance.hpp"
#include "wstark/simplex.hpp"

namespace wstark {

/// Certification thresholds are configuration, not constants: they trade off
/// against grid resolution.
struct CertificationThresholds {
    double gap_tol = 1e-6; ///< |E1 - E2| in units of 8 E_R
    double s_tol = 0.999;  ///< overlap of the two states
    double k_tol = 1e3;    ///< min Petermann factor
};

/// Search domain box; covers every parameter regime of interest.
struct DomainBox {
    double inv_f_min = 0.5, inv_f_max = 15.0;
    double delta_min = 0.0, delta_max = 3.0;
    bool contains(const LatticeParams& p) const {
        const double invF = p.inv_F();
        return invF >= inv_f_min && invF <= inv_f_max && p.delta >= delta_min &&
               p.delta <= delta_max;
    }
};

struct EPCandidate {
    LatticeParams params;
    double gap = 0.0;          ///< |E1 - E2| at convergence
    double overlap_S = 0.0;
    double petermann_min = 0.0;
    bool certified = false;
    int iterations = 0;
    int evaluations = 0;
    int warnings = 0; ///< label-ambiguity events during the search
};

enum class CurveTermination { LeftDomain, FoldDetected, MaxPoints, ConvergenceFailure };

struct EPCurve {
    std::vector<EPCandidate> points;
    double step_r = 0.0;
    CurveTermination termination_reason = CurveTermination::MaxPoints;
};

/// |E1 - E2| of the two most stable central-cell resonances, with state
/// identity held continuous by overlap-matching against a cached reference
/// pair (prevents discontinuities from selection swaps between evaluations).
class GapObjective {
public:
    GapObjective(GridSpec grid, SolverOptions opts = {}) : grid_(std::move(grid)), opts_(opts) {}

    double operator()(const LatticeParams& p);

    /// Full diagnostics at a point (gap, overlap, Petermann), without caching.
    EPCandidate evaluate(const LatticeParams& p) const;

    int warnings() const { return warnings_; }
    void reset_reference() { reference_.reset(); }
    const GridSpec& grid() const { return grid_; }
    const SolverOptions& solver_options() const { return opts_; }

private:
    GridSpec grid_;
    SolverOptions opts_;
    std::optional<std::array<Eigen::VectorXcd, 2>> reference_;
    int warnings_ = 0;
};

/// Which coordinates of (1/F, delta, phi) stay fixed during a search.
struct FrozenCoords {
    bool inv_f = false;
    bool delta = false;
    bool phi = false;
};

/// Nelder-Mead minimization of the eigenvalue gap over the unfrozen
/// coordinates, followed by certification. An uncertified candidate is
/// returned when the minimizer stagnates above tolerance; iteration
/// exhaustion without simplex convergence throws.
EPCandidate find_ep(const LatticeParams& guess, const FrozenCoords& frozen, GapObjective& obj,
                    const CertificationThresholds& thr = {}, const DomainBox& box = {},
                    const SimplexOptions& simplex = {});

/// Continuation of the one-dimensional EP manifold: each step minimizes the
/// gap on a sphere of radius r (spherical shell coordinates
/// d(1/F) = r sin(theta) cos(phi_s), d(delta) = r sin(theta) sin(phi_s),
/// d(phi) = r cos(theta)) centered on the previous EP, continuing in the
/// direction of the previous step.
EPCurve trace_ep_curve(const EPCandidate& start, double r, int max_points, GapObjective& obj,
                       const CertificationThresholds& thr = {}, const DomainBox& box = {},
                       const Eigen::Vector3d& initial_direction = Eigen::Vector3d(0.0, 1.0, 0.0));

enum class ScanAxis { InvF, Delta, Phi };

struct AxisRange {
    ScanAxis axis;
    double lo = 0.0, hi = 0.0;
    int count = 2;
    double value(int i) const { return lo + (hi - lo) * i / (count - 1); }
};

struct GapGrid {
    AxisRange x, y;        ///< x varies along columns, y along rows
    ScanAxis fixed_axis;
    double fixed_value = 0.0;
    Eigen::MatrixXd gap;   ///< gap(iy, ix)
    std::vector<LatticeParams> seeds; ///< local minima below seed_threshold
};

/// Dense gap evaluation over a 2-plane; pure per-cell solves, parallelized.
GapGrid scan_gap_plane(ScanAxis fixed_axis, double fixed_value, const AxisRange& x,
                       const AxisRange& y, const GridSpec& grid, double seed_threshold = 1e-2,
                       int threads = 1, const SolverOptions& opts = {});

/// Apply one coordinate value to a parameter set.
LatticeParams with_axis(LatticeParams p, ScanAxis axis, double value);

} // namespace wstark

#endif
