#include "wstark/ep_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace wstark {

namespace {

/// Two most stable central states, reordered to match a reference pair by
/// maximal overlap when one is supplied. Returns {bool ambiguous, pair}.
std::pair<bool, std::array<Resonance, 2>> matched_pair(
    const SpectrumSlice& s, const std::optional<std::array<Eigen::VectorXcd, 2>>& ref) {
    std::array<Resonance, 2> pair = central_pair(s);
    if (!ref) return {false, pair};
    const double o00 = overlap((*ref)[0], pair[0].right_vector);
    const double o01 = overlap((*ref)[0], pair[1].right_vector);
    const double o10 = overlap((*ref)[1], pair[0].right_vector);
    const double o11 = overlap((*ref)[1], pair[1].right_vector);
    const bool swap = (o01 + o10) > (o00 + o11);
    if (swap) std::swap(pair[0], pair[1]);
    const bool ambiguous = std::abs((o00 + o11) - (o01 + o10)) < 1e-3;
    return {ambiguous, pair};
}

} // namespace

double GapObjective::operator()(const LatticeParams& p) {
    try {
        const SpectrumSlice s = solve_resonances(p, grid_, 0, opts_);
        auto [ambiguous, pair] = matched_pair(s, reference_);
        if (ambiguous) ++warnings_;
        reference_ = {pair[0].right_vector, pair[1].right_vector};
        return std::abs(pair[0].eigenvalue() - pair[1].eigenvalue());
    } catch (const std::exception&) {
        // The simplex wandered somewhere no trackable pair exists; report a
        // value far above any real gap so the search retreats.
        ++warnings_;
        return 1e3;
    }
}

EPCandidate GapObjective::evaluate(const LatticeParams& p) const {
    const SpectrumSlice s = solve_resonances(p, grid_, 0, opts_);
    const std::array<Resonance, 2> pair = central_pair(s);
    EPCandidate c;
    c.params = p;
    c.gap = std::abs(pair[0].eigenvalue() - pair[1].eigenvalue());
    c.overlap_S = overlap(pair[0], pair[1]);
    c.petermann_min = std::min(petermann(pair[0]), petermann(pair[1]));
    return c;
}

LatticeParams with_axis(LatticeParams p, ScanAxis axis, double value) {
    switch (axis) {
        case ScanAxis::InvF: p.F = 1.0 / value; break;
        case ScanAxis::Delta: p.delta = value; break;
        case ScanAxis::Phi: p.phi = normalize_phase(value); break;
    }
    return p;
}

namespace {

/// Penalized objective over the unfrozen coordinates; the penalty keeps the
/// simplex inside the domain box without hard failures.
struct BoxedObjective {
    GapObjective& obj;
    const DomainBox& box;
    LatticeParams base;
    std::vector<ScanAxis> free_axes;

    LatticeParams params_at(const Eigen::VectorXd& x) const {
        LatticeParams p = base;
        for (size_t i = 0; i < free_axes.size(); ++i) p = with_axis(p, free_axes[i], x(i));
        return p;
    }

    double operator()(const Eigen::VectorXd& x) const {
        double penalty = 0.0;
        LatticeParams p = base;
        for (size_t i = 0; i < free_axes.size(); ++i) {
            double v = x(i);
            double lo, hi;
            switch (free_axes[i]) {
                case ScanAxis::InvF: lo = box.inv_f_min; hi = box.inv_f_max; break;
                case ScanAxis::Delta: lo = box.delta_min; hi = box.delta_max; break;
                default: lo = -1e300; hi = 1e300; break; // phi is periodic
            }
            if (v < lo) {
                penalty += (lo - v) * (lo - v);
                v = lo;
            } else if (v > hi) {
                penalty += (v - hi) * (v - hi);
                v = hi;
            }
            p = with_axis(p, free_axes[i], v);
        }
        return obj(p) + 10.0 * penalty;
    }
};

EPCandidate certify(GapObjective& obj, const LatticeParams& p, const CertificationThresholds& thr) {
    EPCandidate c = obj.evaluate(p);
    c.certified = c.gap < thr.gap_tol && c.overlap_S > thr.s_tol && c.petermann_min > thr.k_tol;
    return c;
}

} // namespace

EPCandidate find_ep(const LatticeParams& guess, const FrozenCoords& frozen, GapObjective& obj,
                    const CertificationThresholds& thr, const DomainBox& box,
                    const SimplexOptions& simplex) {
    if (!box.contains(guess))
        throw std::invalid_argument("find_ep: guess lies outside the search domain box");

    BoxedObjective f{obj, box, guess, {}};
    if (!frozen.inv_f) f.free_axes.push_back(ScanAxis::InvF);
    if (!frozen.delta) f.free_axes.push_back(ScanAxis::Delta);
    if (!frozen.phi) f.free_axes.push_back(ScanAxis::Phi);
    if (f.free_axes.empty()) throw std::invalid_argument("find_ep: all coordinates frozen");

    Eigen::VectorXd x0(static_cast<int>(f.free_axes.size()));
    for (size_t i = 0; i < f.free_axes.size(); ++i)
        switch (f.free_axes[i]) {
            case ScanAxis::InvF: x0(i) = guess.inv_F(); break;
            case ScanAxis::Delta: x0(i) = guess.delta; break;
            case ScanAxis::Phi: x0(i) = guess.phi; break;
        }

    obj.reset_reference();
    SimplexResult r = minimize_simplex([&f](const Eigen::VectorXd& x) { return f(x); }, x0, simplex);
    if (!r.converged)
        throw std::runtime_error("find_ep: simplex exhausted " +
                                 std::to_string(simplex.max_iterations * (simplex.restarts + 1)) +
                                 " iterations without converging");

    // The gap scales like sqrt(distance) near an EP, so meeting gap_tol can
    // require localizing the EP to ~gap_tol^2 in parameter space -- far below
    // the first simplex diameter tolerance. Zoom in with progressively tighter
    // restarts until the gap target is met or progress stalls (a non-EP local
    // minimum stagnates and is returned uncertified).
    int iterations = r.iterations, evaluations = r.evaluations;
    SimplexOptions zoom = simplex;
    for (int round = 0; round < 6 && r.value >= thr.gap_tol; ++round) {
        zoom.initial_edge = std::max(0.2 * zoom.diameter_tol, 1e-13);
        zoom.diameter_tol = std::max(1e-3 * zoom.diameter_tol, 1e-14);
        const SimplexResult z =
            minimize_simplex([&f](const Eigen::VectorXd& x) { return f(x); }, r.x, zoom);
        iterations += z.iterations;
        evaluations += z.evaluations;
        if (!z.converged || z.value >= 0.5 * r.value) break; // stagnation
        r = z;
    }

    EPCandidate c = certify(obj, f.params_at(r.x), thr);
    c.iterations = iterations;
    c.evaluations = evaluations;
    c.warnings = obj.warnings();
    return c;
}

namespace {

Eigen::Vector3d coords(const LatticeParams& p) {
    return {p.inv_F(), p.delta, p.phi};
}

LatticeParams from_coords(const LatticeParams& base, const Eigen::Vector3d& c) {
    LatticeParams p = base;
    p.F = 1.0 / c(0);
    p.delta = c(1);
    p.phi = normalize_phase(c(2));
    return p;
}

Eigen::Vector3d shell_direction(double theta, double phi_s) {
    return {std::sin(theta) * std::cos(phi_s), std::sin(theta) * std::sin(phi_s), std::cos(theta)};
}

} // namespace

EPCurve trace_ep_curve(const EPCandidate& start, double r, int max_points, GapObjective& obj,
                       const CertificationThresholds& thr, const DomainBox& box,
                       const Eigen::Vector3d& initial_direction) {
    if (!start.certified)
        throw std::invalid_argument("trace_ep_curve: starting candidate is not certified");
    if (r <= 0.0 || max_points < 1)
        throw std::invalid_argument("trace_ep_curve: need r > 0 and max_points >= 1");

    EPCurve curve;
    curve.step_r = r;
    curve.points.push_back(start);

    Eigen::Vector3d dir = initial_direction.normalized();
    // Shell certification only needs gap accuracy commensurate with the
    // shell radius; the cusp scales like sqrt(distance-to-manifold).
    while (static_cast<int>(curve.points.size()) < max_points) {
        const Eigen::Vector3d center = coords(curve.points.back().params);
        double step = r;
        bool accepted = false;
        bool folded = false;
        while (step >= r / 8.0 - 1e-15) {
            // Minimize the gap on the shell of radius `step` around `center`,
            // starting from the continuation of the previous direction.
            const double th0 = std::acos(std::clamp(dir(2), -1.0, 1.0));
            const double ph0 = std::atan2(dir(1), dir(0));
            obj.reset_reference();
            auto shell_f = [&](const Eigen::VectorXd& a) {
                const Eigen::Vector3d c = center + step * shell_direction(a(0), a(1));
                LatticeParams p = from_coords(curve.points.back().params, c);
                if (!box.contains(p)) return 1e3 + c.squaredNorm(); // soft wall
                return obj(p);
            };
            SimplexOptions sopts;
            sopts.initial_edge = 0.2; // radians on the shell
            Eigen::VectorXd a0(2);
            a0 << th0, ph0;
            const SimplexResult sr = minimize_simplex(shell_f, a0, sopts);

            const Eigen::Vector3d new_dir = shell_direction(sr.x(0), sr.x(1));
            const Eigen::Vector3d cand = center + step * new_dir;
            LatticeParams p = from_coords(curve.points.back().params, cand);
            if (!box.contains(p)) {
                curve.termination_reason = CurveTermination::LeftDomain;
                return curve;
            }
            // Certify with a gap tolerance scaled to the shell geometry: the
            // transverse cusp prevents exact zero on the sphere.
            EPCandidate c = obj.evaluate(p);
            c.iterations = sr.iterations;
            c.evaluations = sr.evaluations;
            const double shell_gap_tol = std::max(thr.gap_tol, 0.05 * std::sqrt(step));
            c.certified = c.gap < shell_gap_tol && c.overlap_S > thr.s_tol;
            if (c.certified) {
                if (new_dir.dot(dir) <= 0.0) {
                    folded = true; // the manifold turned back on itself
                } else {
                    dir = new_dir;
                    curve.points.push_back(c);
                    accepted = true;
                }
                break;
            }
            step *= 0.5;
        }
        if (folded) {
            curve.termination_reason = CurveTermination::FoldDetected;
            return curve;
        }
        if (!accepted) {
            curve.termination_reason = CurveTermination::ConvergenceFailure;
            return curve;
        }
    }
    curve.termination_reason = CurveTermination::MaxPoints;
    return curve;
}

GapGrid scan_gap_plane(ScanAxis fixed_axis, double fixed_value, const AxisRange& x,
                       const AxisRange& y, const GridSpec& grid, double seed_threshold,
                       int threads, const SolverOptions& opts) {
    if (x.count < 2 || y.count < 2)
        throw std::invalid_argument("scan_gap_plane: resolution must be >= 2 per axis");
    if (x.hi <= x.lo || y.hi <= y.lo)
        throw std::invalid_argument("scan_gap_plane: ranges must be increasing");

    GapGrid g;
    g.x = x;
    g.y = y;
    g.fixed_axis = fixed_axis;
    g.fixed_value = fixed_value;
    g.gap.resize(y.count, x.count);

    const int total = x.count * y.count;
    const int nthreads = std::max(1, threads);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int idx = next++; idx < total; idx = next++) {
            const int iy = idx / x.count, ix = idx % x.count;
            LatticeParams p = with_axis(LatticeParams(1.0, 0.0, 0.0, 1.0), fixed_axis, fixed_value);
            p = with_axis(p, x.axis, x.value(ix));
            p = with_axis(p, y.axis, y.value(iy));
            double val;
            try {
                const GapObjective local(grid, opts); // stateless per-cell evaluation
                val = local.evaluate(p).gap;
            } catch (const std::exception&) {
                val = std::numeric_limits<double>::quiet_NaN();
            }
            g.gap(iy, ix) = val;
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (int iy = 1; iy + 1 < y.count; ++iy)
        for (int ix = 1; ix + 1 < x.count; ++ix) {
            const double v = g.gap(iy, ix);
            if (std::isnan(v) || v >= seed_threshold) continue;
            if (v <= g.gap(iy - 1, ix) && v <= g.gap(iy + 1, ix) && v <= g.gap(iy, ix - 1) &&
                v <= g.gap(iy, ix + 1)) {
                LatticeParams p = with_axis(LatticeParams(1.0, 0.0, 0.0, 1.0), fixed_axis, fixed_value);
                p = with_axis(p, x.axis, x.value(ix));
                p = with_axis(p, y.axis, y.value(iy));
                g.seeds.push_back(p);
            }
        }
    return g;
}

} // namespace wstark
