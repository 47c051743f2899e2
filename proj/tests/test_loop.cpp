#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wstark/loop.hpp"

using namespace wstark;

namespace {

/// Exactly solvable complex-symmetric 2x2 family
///   H(lambda) = [[lambda, 1], [1, -lambda]],  lambda = x + i y,
/// with a square-root branch point (defective operator) at lambda = i.
/// Eigenvalues are +-sqrt(1 + lambda^2); the c-norm v^T v of the
/// eigenvectors vanishes like sqrt(lambda - i) at the branch point, which is
/// what produces the doubled sign period of the transported eigenvectors.
PairSolver branch_point_solver(double inv_f0, double phi0) {
    return [=](const LatticeParams& p) {
        const Complex lambda(p.inv_F() - inv_f0, p.phi - phi0 + 1.0);
        const Complex e = std::sqrt(1.0 + lambda * lambda);
        TrackedPair out;
        out.values = {e, -e};
        for (int k = 0; k < 2; ++k) {
            Eigen::VectorXcd v(2);
            v << Complex(1.0, 0.0), out.values[k] - lambda;
            const Complex c = std::sqrt(v.cwiseProduct(v).sum());
            out.vectors[k] = v / c;
        }
        return out;
    };
}

LoopSpec centered_loop(double inv_f0, double phi0, int steps, int cycles) {
    LoopSpec spec;
    spec.center = LatticeParams(1.0, 1.0, phi0, 1.0 / inv_f0);
    spec.radius_r = 0.3;
    spec.steps_m = steps;
    spec.cycles = cycles;
    return spec;
}

} // namespace

TEST_CASE("enclosing loop swaps the pair; equal-radius offset loop does not") {
    const double inv_f0 = 5.0, phi0 = 0.5;
    const PairSolver solver = branch_point_solver(inv_f0, phi0);

    LoopSpec enclosing = centered_loop(inv_f0, phi0, 96, 1);
    const LoopTrace swapped = run_loop_with(solver, enclosing);
    CHECK(swapped.permutation == LoopPermutation::Swap);
    CHECK(swapped.encloses_ep);

    LoopSpec outside = enclosing;
    outside.offset_phi = 1.5; // moves the loop well clear of the branch point
    const LoopTrace id = run_loop_with(solver, outside);
    CHECK(id.permutation == LoopPermutation::Identity);
    CHECK(!id.encloses_ep);
    // Non-enclosing loop: two disjoint closed eigenvalue tracks.
    for (int k = 0; k < 2; ++k) {
        const auto& t = id.eigenvalue_tracks[k];
        CHECK(std::abs(t.back() - t.front()) < 1e-10);
    }
    // Identity cycle returns both vectors with positive sign.
    CHECK(id.cycle_records.back().signs[0] == doctest::Approx(1.0));
    CHECK(id.cycle_records.back().signs[1] == doctest::Approx(1.0));
}

TEST_CASE("eigenvalues close after two cycles, vectors only after four") {
    const double inv_f0 = 5.0, phi0 = 0.5;
    const PairSolver solver = branch_point_solver(inv_f0, phi0);
    const LoopTrace t = run_loop_with(solver, centered_loop(inv_f0, phi0, 128, 4));
    REQUIRE(t.cycle_records.size() == 4);

    // Cycle-by-cycle cumulative permutations: swap, identity, swap, identity.
    CHECK(t.cycle_records[0].permutation == LoopPermutation::Swap);
    CHECK(t.cycle_records[1].permutation == LoopPermutation::Identity);
    CHECK(t.cycle_records[2].permutation == LoopPermutation::Swap);
    CHECK(t.cycle_records[3].permutation == LoopPermutation::Identity);

    // Two cycles close the eigenvalue tracks but negate both vectors; only
    // after four cycles does the full frame return.
    CHECK(t.cycle_records[1].signs[0] == doctest::Approx(-1.0));
    CHECK(t.cycle_records[1].signs[1] == doctest::Approx(-1.0));
    CHECK(t.cycle_records[3].signs[0] == doctest::Approx(1.0));
    CHECK(t.cycle_records[3].signs[1] == doctest::Approx(1.0));

    const int m = 128;
    for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(t.eigenvalue_tracks[k][2 * m] - t.eigenvalue_tracks[k][0]) < 1e-9);
        CHECK(std::abs(t.component_tracks[k][2 * m] + t.component_tracks[k][0]) < 1e-9);
        CHECK(std::abs(t.component_tracks[k][4 * m] - t.component_tracks[k][0]) < 1e-9);
    }
}

TEST_CASE("coarse sampling is repaired by continuity refinement") {
    const double inv_f0 = 5.0, phi0 = 0.5;
    const PairSolver solver = branch_point_solver(inv_f0, phi0);
    // 32 steps around a loop hugging the branch point: raw neighbor overlaps
    // dip, so the tracker must insert bisection points, and the verdict must
    // match the finely sampled run.
    const LoopTrace coarse = run_loop_with(solver, centered_loop(inv_f0, phi0, 32, 1), 0.9999, 6);
    CHECK(coarse.permutation == LoopPermutation::Swap);
    CHECK(coarse.refinements > 0);
}

TEST_CASE("step budget: loop sampling stays within steps * cycles + refinements") {
    int solves = 0;
    const double inv_f0 = 5.0, phi0 = 0.5;
    const PairSolver base = branch_point_solver(inv_f0, phi0);
    const PairSolver counting = [&](const LatticeParams& p) {
        ++solves;
        return base(p);
    };
    const LoopTrace t = run_loop_with(counting, centered_loop(inv_f0, phi0, 96, 1));
    CHECK(solves <= 96 + 1 + t.refinements);
}
