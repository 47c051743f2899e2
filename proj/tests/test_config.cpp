#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wstark/config.hpp"

using namespace wstark;

TEST_CASE("empty text yields full defaults") {
    const RunConfig c = parse_config("");
    CHECK(c == RunConfig{});
    CHECK(c.grid.points_per_period == 24);
    CHECK(c.lattice.V0 == 1.0);
}

TEST_CASE("single key keeps defaults elsewhere") {
    const RunConfig c = parse_config("lattice.delta = 1.0\n");
    CHECK(c.lattice.delta == 1.0);
    RunConfig d;
    d.lattice.delta = 1.0;
    CHECK(c == d);
}

TEST_CASE("comments and blank lines are ignored") {
    const RunConfig c = parse_config("# a comment\n\n  lattice.F = 0.5  # trailing\n");
    CHECK(c.lattice.F == 0.5);
}

TEST_CASE("out-of-range value names the key") {
    CHECK_THROWS_WITH_AS(parse_config("grid.points_per_period = -4\n"),
                         doctest::Contains("points_per_period"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config("gpe.relaxation = 1.5\n"),
                         doctest::Contains("gpe.relaxation"), std::invalid_argument);
}

TEST_CASE("unknown keys are rejected, not ignored") {
    CHECK_THROWS_WITH_AS(parse_config("lattice.typo = 1\n"), doctest::Contains("unknown key"),
                         std::invalid_argument);
}

TEST_CASE("malformed lines are rejected") {
    CHECK_THROWS_AS(parse_config("lattice.delta 1.0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("lattice.delta = abc\n"), std::invalid_argument);
}

TEST_CASE("round-trip: parse(serialize(c)) == c") {
    RunConfig c;
    c.lattice = LatticeParams(1.0, 2.251, -3.035, 1.0 / 3.814);
    c.grid.points_per_period = 32;
    c.grid.cap_strength = 17.25;
    c.grid.kinetic = KineticScheme::Stencil9;
    c.certification.gap_tol = 5e-7;
    c.seed = 42;
    c.output_dir = "out";
    const RunConfig back = parse_config(serialize_config(c));
    CHECK(back == c);
    // Twice, for byte-stability of the serialized form.
    CHECK(serialize_config(parse_config(serialize_config(back))) == serialize_config(c));
}
