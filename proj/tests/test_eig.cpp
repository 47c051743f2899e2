#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wstark/eig.hpp"
#include "wstark/types.hpp"

#include <algorithm>
#include <vector>

using namespace wstark;

TEST_CASE("diagonal matrix") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 0) = Complex(1.0, -0.5);
    m(1, 1) = Complex(-2.0, 0.25);
    m(2, 2) = Complex(0.0, 3.0);
    const EigenDecomposition d = eig_dense(m);
    std::vector<Complex> vals(d.values.data(), d.values.data() + 3);
    std::sort(vals.begin(), vals.end(),
              [](Complex a, Complex b) { return a.real() < b.real(); });
    CHECK(std::abs(vals[0] - Complex(-2.0, 0.25)) < 1e-14);
    CHECK(std::abs(vals[1] - Complex(0.0, 3.0)) < 1e-14);
    CHECK(std::abs(vals[2] - Complex(1.0, -0.5)) < 1e-14);
}

TEST_CASE("eigenpair residuals on a random complex-symmetric matrix") {
    const int n = 40;
    srand(7);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(n, n);
    Eigen::MatrixXcd m = a + a.transpose(); // complex symmetric, non-hermitian
    const EigenDecomposition d = eig_dense(m);
    for (int j = 0; j < n; ++j) {
        const Eigen::VectorXcd v = d.vectors.col(j);
        CHECK((m * v - d.values(j) * v).norm() / v.norm() < 1e-12);
    }
}

TEST_CASE("left eigenvector of a complex-symmetric matrix is the conjugate") {
    const int n = 25;
    srand(11);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(n, n);
    Eigen::MatrixXcd m = a + a.transpose();
    const EigenDecomposition d = eig_dense(m);
    for (int j = 0; j < n; ++j) {
        // Left vector w satisfies w^H m = mu w^H; with w = conj(v) this is
        // v^T m = mu v^T, i.e. m^T v = mu v — true because m^T = m.
        const Eigen::VectorXcd v = d.vectors.col(j);
        CHECK((m.transpose() * v - d.values(j) * v).norm() / v.norm() < 1e-12);
    }
}

TEST_CASE("non-square input rejected") {
    Eigen::MatrixXcd m(2, 3);
    CHECK_THROWS_AS(eig_dense(m), std::invalid_argument);
}
