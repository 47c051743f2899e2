#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wstark/simplex.hpp"

using namespace wstark;

TEST_CASE("quadratic bowl") {
    auto f = [](const Eigen::VectorXd& x) {
        return (x(0) - 1.5) * (x(0) - 1.5) + 3.0 * (x(1) + 0.25) * (x(1) + 0.25);
    };
    Eigen::VectorXd x0(2);
    x0 << 0.0, 0.0;
    const SimplexResult r = minimize_simplex(f, x0);
    CHECK(r.converged);
    CHECK(r.x(0) == doctest::Approx(1.5).epsilon(1e-4));
    CHECK(r.x(1) == doctest::Approx(-0.25).epsilon(1e-4));
}

TEST_CASE("square-root cusp (the gap-objective shape near a defective point)") {
    auto f = [](const Eigen::VectorXd& x) {
        return std::sqrt(std::hypot(x(0) - 0.3, x(1) + 0.7));
    };
    Eigen::VectorXd x0(2);
    x0 << 0.0, 0.0;
    SimplexOptions opts;
    opts.max_iterations = 600;
    const SimplexResult r = minimize_simplex(f, x0, opts);
    CHECK(r.converged);
    CHECK(std::abs(r.x(0) - 0.3) < 2e-5);
    CHECK(std::abs(r.x(1) + 0.7) < 2e-5);
}

TEST_CASE("rosenbrock valley, one dimension higher") {
    auto f = [](const Eigen::VectorXd& x) {
        double s = 0.0;
        for (int i = 0; i + 1 < x.size(); ++i)
            s += 100.0 * std::pow(x(i + 1) - x(i) * x(i), 2) + std::pow(1.0 - x(i), 2);
        return s;
    };
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(3);
    SimplexOptions opts;
    opts.max_iterations = 2000;
    opts.initial_edge = 0.5;
    const SimplexResult r = minimize_simplex(f, x0, opts);
    CHECK(r.converged);
    for (int i = 0; i < 3; ++i) CHECK(r.x(i) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("iteration budget is respected") {
    auto f = [](const Eigen::VectorXd& x) { return std::abs(std::sin(50 * x(0))) + 0.1 * x(0) * x(0); };
    Eigen::VectorXd x0(1);
    x0 << 10.0;
    SimplexOptions opts;
    opts.max_iterations = 20;
    opts.restarts = 1;
    const SimplexResult r = minimize_simplex(f, x0, opts);
    CHECK(r.iterations <= 40);
}
