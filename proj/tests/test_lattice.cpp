#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wstark/lattice.hpp"

using namespace wstark;

TEST_CASE("potential value basics") {
    LatticeParams p(1.0, 1.0, 0.0, 0.25);
    CHECK(potential_value(0.0, p) == doctest::Approx(1.0).epsilon(1e-15));

    LatticeParams mono(1.0, 0.0, 0.9, 0.25);
    for (double x : {-2.0, 0.3, 1.7, 5.5})
        CHECK(potential_value(x, mono) == doctest::Approx(0.5 * std::cos(x)).epsilon(1e-15));
}

TEST_CASE("potential periodicity and sign-of-delta reflection") {
    LatticeParams p(1.0, 1.7, 0.4, 0.25);
    LatticeParams flipped(1.0, -1.7, 0.4 + kPi, 0.25);
    for (double x = -9.0; x < 9.0; x += 0.37) {
        CHECK(potential_value(x + 2 * kPi, p) ==
              doctest::Approx(potential_value(x, p)).epsilon(1e-13));
        // V(x; delta, phi) == V(x; -delta, phi+pi) pointwise.
        CHECK(potential_value(x, p) == doctest::Approx(potential_value(x, flipped)).epsilon(1e-13));
    }
}

TEST_CASE("phase stored normalized to (-pi, pi]") {
    CHECK(LatticeParams(1.0, 1.0, 3 * kPi, 0.2).phi == doctest::Approx(kPi));
    CHECK(LatticeParams(1.0, 1.0, -kPi, 0.2).phi == doctest::Approx(kPi));
    CHECK(LatticeParams(1.0, 1.0, 0.5, 0.2).phi == doctest::Approx(0.5));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(LatticeParams(1.0, 0.0, 0.0, 0.0).validate_for_resonances(),
                    std::invalid_argument);
    CHECK_THROWS_AS(LatticeParams(-1.0, 0.0, 0.0, 0.2).validate_for_resonances(),
                    std::invalid_argument);
    CHECK_NOTHROW(LatticeParams(1.0, 0.0, 0.0, 0.2).validate_for_resonances());
}

TEST_CASE("CAP profile") {
    GridSpec g;
    g.cap_width = 4;
    g.cap_order = 2;
    const double onset = g.cap_onset();
    const double w = g.cap_length();
    CHECK(cap_profile(onset, g) == 0.0);
    CHECK(cap_profile(onset + 1.0, g) == 0.0);
    CHECK(cap_profile(onset - w, g) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cap_profile(onset - 0.5 * w, g) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("3-point stencil kinetic matrix, N=4") {
    GridSpec legal;
    legal.periods_left = 1;
    legal.periods_right = 1;
    legal.points_per_period = 4;
    legal.kinetic = KineticScheme::Stencil3;
    const Eigen::MatrixXd t = kinetic_matrix(legal);
    const double dx = legal.dx();
    for (int i = 0; i < t.rows(); ++i) {
        CHECK(t(i, i) == doctest::Approx(1.0 / (dx * dx)).epsilon(1e-14));
        if (i + 1 < t.rows())
            CHECK(t(i, i + 1) == doctest::Approx(-0.5 / (dx * dx)).epsilon(1e-14));
    }
    CHECK((t - t.transpose()).norm() == 0.0);
}

TEST_CASE("Hamiltonian is complex symmetric; real symmetric when eta = 0") {
    LatticeParams p(1.0, 0.8, -1.1, 0.3);
    GridSpec g;
    g.periods_left = 5;
    g.periods_right = 3;
    g.points_per_period = 12;
    g.cap_width = 2;
    for (KineticScheme k :
         {KineticScheme::Spectral, KineticScheme::Stencil9, KineticScheme::Stencil3}) {
        g.kinetic = k;
        const HamiltonianMatrix h = build_hamiltonian(p, g);
        CHECK(h.complex_symmetric);
        CHECK((h.entries - h.entries.transpose()).norm() < 1e-11);
    }
    g.cap_strength = 0.0;
    const HamiltonianMatrix h0 = build_hamiltonian(p, g);
    CHECK(h0.entries.imag().norm() == 0.0);
}

TEST_CASE("density length mismatch is an input error") {
    LatticeParams p(1.0, 0.0, 0.0, 0.3, 0.1);
    GridSpec g;
    g.periods_left = 4;
    g.periods_right = 2;
    g.points_per_period = 8;
    g.cap_width = 2;
    Eigen::VectorXd bad = Eigen::VectorXd::Ones(g.size() + 1);
    CHECK_THROWS_AS(build_hamiltonian(p, g, bad), std::invalid_argument);
    Eigen::VectorXd good = Eigen::VectorXd::Ones(g.size());
    CHECK_NOTHROW(build_hamiltonian(p, g, good));
}

TEST_CASE("spectral and 9-point kinetic agree on smooth data") {
    GridSpec g;
    g.periods_left = 4;
    g.periods_right = 4;
    g.points_per_period = 32;
    const int n = g.size();
    Eigen::VectorXd f(n);
    const double L = n * g.dx();
    for (int i = 0; i < n; ++i) f(i) = std::sin(2 * kPi * 3 * i / n);
    g.kinetic = KineticScheme::Spectral;
    Eigen::VectorXd ds = kinetic_matrix(g) * f;
    g.kinetic = KineticScheme::Stencil9;
    Eigen::VectorXd d9 = kinetic_matrix(g) * f;
    const double kf = 2 * kPi * 3 / L;
    // -1/2 f'' = k^2/2 f for a pure mode.
    for (int i = 8; i < n - 8; ++i) {
        CHECK(ds(i) == doctest::Approx(0.5 * kf * kf * f(i)).epsilon(1e-10));
        CHECK(d9(i) == doctest::Approx(0.5 * kf * kf * f(i)).epsilon(1e-6));
    }
}
