#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wstark/gpe.hpp"

using namespace wstark;

namespace {

GridSpec small_grid() {
    GridSpec g;
    g.periods_left = 9;
    g.periods_right = 4;
    g.points_per_period = 16;
    g.cap_width = 5;
    g.cap_strength = 20.0;
    return g;
}

/// Short test-grid CAP: accept moderately leaky states (see solver tests).
SolverOptions loose_leak() {
    SolverOptions o;
    o.leak_threshold = 0.4;
    return o;
}

GpeOptions loose_gpe() {
    GpeOptions o;
    o.solver = loose_leak();
    return o;
}

} // namespace

TEST_CASE("g = 0 reproduces the linear resonance in a single pass") {
    LatticeParams p(1.0, 1.0, -2.991, 1.0 / 3.8);
    GridSpec g = small_grid();
    const Resonance seed = central_pair(solve_resonances(p, g, 0, loose_leak()))[0];
    const NonlinearResonance nl = solve_nonlinear(p, g, seed, loose_gpe());
    CHECK(nl.iterations == 1);
    CHECK(std::abs(nl.mu - seed.eigenvalue()) < 1e-12);
    CHECK(nl.g_used == 0.0);
    // Density convention: unit integral over the central period.
    const double dx = g.dx();
    double integral = 0.0;
    for (int i = 0; i < g.size(); ++i)
        if (g.x(i) >= -kPi && g.x(i) < kPi) integral += nl.density(i) * dx;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("weak interaction converges and shifts mu continuously") {
    GridSpec g = small_grid();
    LatticeParams p0(1.0, 1.0, -2.991, 1.0 / 3.8);
    const Resonance seed = central_pair(solve_resonances(p0, g, 0, loose_leak()))[0];
    const Complex mu0 = solve_nonlinear(p0, g, seed, loose_gpe()).mu;

    LatticeParams pp = p0;
    pp.g = 0.02;
    const NonlinearResonance plus = solve_nonlinear(pp, g, seed, loose_gpe());
    CHECK(plus.residual < 1e-9);
    CHECK(plus.iterations < 500);
    CHECK(std::abs(plus.mu - mu0) > 1e-6);  // the interaction does something
    CHECK(std::abs(plus.mu - mu0) < 5e-2);  // ...but perturbatively

    LatticeParams pm = p0;
    pm.g = -0.02;
    const NonlinearResonance minus = solve_nonlinear(pm, g, seed, loose_gpe());
    // Repulsive and attractive mean fields push the chemical potential in
    // opposite directions around the linear value.
    const double up = plus.mu.real() - mu0.real();
    const double dn = minus.mu.real() - mu0.real();
    CHECK(up * dn < 0.0);
}

TEST_CASE("crossing classifier on synthetic two-track scans") {
    auto make_scan = [](bool real_crosses, bool imag_crosses) {
        std::vector<std::tuple<double, Complex, Complex>> scan;
        for (int i = 0; i <= 20; ++i) {
            const double f = 0.2 + 0.01 * i;
            const double t = f - 0.3; // crossing parameter
            // Avoided part: hyperbola; crossing part: linear sign change.
            const double avoid = std::sqrt(t * t + 0.01);
            const double cross = t;
            const double re_gap = real_crosses ? cross : avoid;
            const double im_gap = imag_crosses ? cross : avoid;
            scan.emplace_back(f, Complex(0.5 + re_gap, -0.1 + im_gap),
                              Complex(0.5 - re_gap, -0.1 - im_gap));
        }
        return scan;
    };

    CHECK(classify_crossing(make_scan(false, true)).type == CrossingType::TypeI);
    CHECK(classify_crossing(make_scan(true, false)).type == CrossingType::TypeII);
    CHECK(classify_crossing(make_scan(true, true)).type == CrossingType::Degenerate);
    CHECK_THROWS_AS(classify_crossing(make_scan(false, false)), std::domain_error);
}

TEST_CASE("crossing classifier is invariant under branch relabeling") {
    std::vector<std::tuple<double, Complex, Complex>> scan, swapped;
    for (int i = 0; i <= 20; ++i) {
        const double f = 0.2 + 0.01 * i;
        const double t = f - 0.3;
        const Complex a(0.5 + std::sqrt(t * t + 0.01), -0.1 + t);
        const Complex b(0.5 - std::sqrt(t * t + 0.01), -0.1 - t);
        scan.emplace_back(f, a, b);
        swapped.emplace_back(f, b, a);
    }
    CHECK(classify_crossing(scan).type == classify_crossing(swapped).type);
    CHECK(classify_crossing(scan).type == CrossingType::TypeI);
}

TEST_CASE("nonlinear petermann of the linear limit matches the linear value") {
    GridSpec g = small_grid();
    LatticeParams p(1.0, 1.0, -2.991, 1.0 / 3.8);
    const Resonance seed = central_pair(solve_resonances(p, g, 0, loose_leak()))[0];
    const NonlinearResonance nl = solve_nonlinear(p, g, seed, loose_gpe());
    const double k_nl = nonlinear_petermann(p, g, nl);
    CHECK(k_nl == doctest::Approx(petermann(seed)).epsilon(1e-6));
    CHECK(k_nl >= 1.0);
}
