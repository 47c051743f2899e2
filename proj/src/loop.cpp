#include "wstark/loop.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wstark {

namespace {

LatticeParams loop_point(const LoopSpec& spec, double beta) {
    LatticeParams p = spec.center;
    const double inv_f = spec.center.inv_F() + spec.radius_r * std::sin(beta) + spec.offset_inv_f;
    p.F = 1.0 / inv_f;
    p.phi = normalize_phase(spec.center.phi + spec.radius_r * std::cos(beta) + spec.offset_phi);
    return p;
}

/// Match `cand` to `prev` by total overlap; returns true when the order had
/// to be swapped, and the smaller matched overlap through `quality`.
bool match_order(const TrackedPair& prev, TrackedPair& cand, double& quality) {
    const double o00 = overlap(prev.vectors[0], cand.vectors[0]);
    const double o01 = overlap(prev.vectors[0], cand.vectors[1]);
    const double o10 = overlap(prev.vectors[1], cand.vectors[0]);
    const double o11 = overlap(prev.vectors[1], cand.vectors[1]);
    const bool swap = (o01 + o10) > (o00 + o11);
    if (swap) {
        std::swap(cand.values[0], cand.values[1]);
        std::swap(cand.vectors[0], cand.vectors[1]);
        quality = std::min(o01, o10);
    } else {
        quality = std::min(o00, o11);
    }
    return swap;
}

/// Parallel-transport gauge: c-normalized vectors carry a residual sign
/// freedom; pick the sign with positive real bilinear overlap against the
/// predecessor.
void fix_gauge(const TrackedPair& prev, TrackedPair& cand) {
    for (int a = 0; a < 2; ++a) {
        const Complex c = prev.vectors[a].transpose() * cand.vectors[a];
        if (c.real() < 0.0) cand.vectors[a] = -cand.vectors[a];
    }
}

} // namespace

LoopTrace run_loop_with(const PairSolver& solver, const LoopSpec& spec,
                        double continuity_threshold, int max_halvings) {
    if (spec.steps_m < 32) throw std::invalid_argument("run_loop_with: steps_m must be >= 32");
    if (spec.radius_r <= 0.0) throw std::invalid_argument("run_loop_with: radius_r must be > 0");
    if (spec.cycles < 1) throw std::invalid_argument("run_loop_with: cycles must be >= 1");

    LoopTrace trace;
    const int total = spec.steps_m * spec.cycles;

    TrackedPair start = solver(loop_point(spec, 0.0));
    // Tracked component: index of max |Psi_1|, frozen at beta = 0.
    int comp_index = 0;
    start.vectors[0].cwiseAbs().maxCoeff(&comp_index);

    auto record = [&](double beta, const TrackedPair& pair) {
        trace.beta_samples.push_back(beta);
        for (int a = 0; a < 2; ++a) {
            trace.eigenvalue_tracks[a].push_back(pair.values[a]);
            trace.component_tracks[a].push_back(pair.vectors[a](comp_index));
        }
    };

    TrackedPair cur = start;
    double cur_beta = 0.0;
    record(0.0, cur);

    // Advance continuity from cur_beta to beta, bisecting when the matched
    // overlap dips below threshold (the loop passes near a degeneracy).
    std::function<void(double, int)> advance = [&](double beta, int depth) {
        TrackedPair cand = solver(loop_point(spec, beta));
        double quality = 0.0;
        match_order(cur, cand, quality);
        if (quality < continuity_threshold) {
            if (depth >= max_halvings)
                throw std::runtime_error(
                    "run_loop_with: continuity failure in beta interval [" + std::to_string(cur_beta) +
                    ", " + std::to_string(beta) + "] after " + std::to_string(max_halvings) +
                    " halvings (path passes too near the EP)");
            const double mid = 0.5 * (cur_beta + beta);
            ++trace.refinements;
            advance(mid, depth + 1);
            advance(beta, depth + 1);
            return;
        }
        fix_gauge(cur, cand);
        cur = cand;
        cur_beta = beta;
    };

    for (int j = 1; j <= total; ++j) {
        const double beta = 2.0 * kPi * j / spec.steps_m;
        advance(beta, 0);
        record(beta, cur);

        if (j % spec.steps_m == 0) {
            // Completed 2pi: compare against the beta = 0 states. The
            // permutation is read off the eigenvalue assignment: close to
            // the degeneracy the two hybrid vectors are nearly parallel, so
            // Hermitian overlaps cannot separate the labels, while the
            // eigenvalue tracks stay well apart everywhere on the loop.
            TrackedPair closed = cur;
            const double keep = std::abs(closed.values[0] - start.values[0]) +
                                std::abs(closed.values[1] - start.values[1]);
            const double cross = std::abs(closed.values[0] - start.values[1]) +
                                 std::abs(closed.values[1] - start.values[0]);
            const bool swapped = cross < keep;
            if (swapped) {
                std::swap(closed.values[0], closed.values[1]);
                std::swap(closed.vectors[0], closed.vectors[1]);
            }
            CycleRecord rec;
            rec.permutation = swapped ? LoopPermutation::Swap : LoopPermutation::Identity;
            for (int a = 0; a < 2; ++a) {
                const Complex c = start.vectors[a].transpose() * closed.vectors[a];
                rec.signs[a] = (c.real() < 0.0) ? -1.0 : 1.0;
            }
            trace.cycle_records.push_back(rec);
        }
    }

    trace.permutation = trace.cycle_records.front().permutation;
    trace.encloses_ep = (trace.permutation == LoopPermutation::Swap);
    return trace;
}

TrackedPair TrackingPairSolver::operator()(const LatticeParams& p) {
    ++solves_;
    const SpectrumSlice s = solve_resonances(p, grid_, 0, opts_);
    TrackedPair t;
    if (!seeded_) {
        const std::array<Resonance, 2> pair = central_pair(s);
        for (int a = 0; a < 2; ++a) {
            t.values[a] = pair[a].eigenvalue();
            t.vectors[a] = pair[a].right_vector;
        }
    } else {
        // Best joint assignment of the two tracked slots over all candidates.
        const int n = static_cast<int>(s.resonances.size());
        if (n < 2)
            throw std::runtime_error("TrackingPairSolver: fewer than two physical resonances");
        double best = -1.0;
        int bi = 0, bj = 1;
        for (int i = 0; i < n; ++i) {
            const double q0 = overlap(ref_[0], s.resonances[i].right_vector);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double q = q0 + overlap(ref_[1], s.resonances[j].right_vector);
                if (q > best) {
                    best = q;
                    bi = i;
                    bj = j;
                }
            }
        }
        t.values = {s.resonances[bi].eigenvalue(), s.resonances[bj].eigenvalue()};
        t.vectors = {s.resonances[bi].right_vector, s.resonances[bj].right_vector};
    }
    ref_ = t.vectors;
    seeded_ = true;
    return t;
}

LoopTrace run_loop(const LoopSpec& spec, const GridSpec& grid, const SolverOptions& opts) {
    TrackingPairSolver solver(grid, opts);
    return run_loop_with(std::ref(solver), spec);
}

LoopFamilyReport classify_loop_family(const std::vector<LoopSpec>& specs, const GridSpec& grid,
                                      const SolverOptions& opts) {
    if (specs.size() < 2)
        throw std::invalid_argument("classify_loop_family: need at least 2 loop specs");
    LoopFamilyReport rep;
    for (const LoopSpec& s : specs) {
        rep.traces.push_back(run_loop(s, grid, opts));
        rep.enclosed.push_back(rep.traces.back().encloses_ep);
        if (rep.enclosed.back()) ++rep.swap_count;
    }
    return rep;
}

} // namespace wstark
