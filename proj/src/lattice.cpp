#include "wstark/lattice.hpp"

#include <vector>

namespace wstark {

Eigen::MatrixXd kinetic_matrix(const GridSpec& grid) {
    const int n = grid.size();
    const double dx = grid.dx();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);

    switch (grid.kinetic) {
        case KineticScheme::Spectral: {
            // Circulant Fourier second derivative: t_{jl} = c_{(j-l) mod n},
            // c_m = (1/n) sum_q (k_q^2/2) cos(2 pi q m / n). Even in m, so the
            // matrix is symmetric.
            const double box = n * dx;
            std::vector<double> c(n, 0.0);
            for (int m = 0; m < n; ++m) {
                double acc = 0.0;
                for (int q = 0; q < n; ++q) {
                    const int qs = (q <= n / 2) ? q : q - n;
                    const double k = 2.0 * kPi * qs / box;
                    acc += 0.5 * k * k * std::cos(2.0 * kPi * q * m / n);
                }
                c[m] = acc / n;
            }
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) t(j, l) = c[(j - l + n) % n];
            break;
        }
        case KineticScheme::Stencil9: {
            // 8th-order central coefficients for d^2/dx^2.
            const double w0 = -205.0 / 72.0;
            const double w[4] = {8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
            const double s = -0.5 / (dx * dx);
            for (int j = 0; j < n; ++j) {
                t(j, j) = s * w0;
                for (int m = 1; m <= 4; ++m) {
                    if (j + m < n) t(j, j + m) = s * w[m - 1];
                    if (j - m >= 0) t(j, j - m) = s * w[m - 1];
                }
            }
            break;
        }
        case KineticScheme::Stencil3: {
            const double s = 1.0 / (dx * dx);
            for (int j = 0; j < n; ++j) {
                t(j, j) = s;
                if (j + 1 < n) t(j, j + 1) = -0.5 * s;
                if (j - 1 >= 0) t(j, j - 1) = -0.5 * s;
            }
            break;
        }
    }
    return t;
}

HamiltonianMatrix build_hamiltonian(const LatticeParams& p, const GridSpec& grid,
                                    const std::optional<Eigen::VectorXd>& density) {
    grid.validate();
    const int n = grid.size();
    if (density && density->size() != n)
        throw std::invalid_argument("build_hamiltonian: density length " +
                                    std::to_string(density->size()) + " != grid size " + std::to_string(n));

    HamiltonianMatrix h;
    h.entries = kinetic_matrix(grid).cast<Complex>();
    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        Complex d = potential_value(x, p) + p.F * x - Complex(0.0, grid.cap_strength * cap_profile(x, grid));
        if (density) d += p.g * (*density)(i);
        h.entries(i, i) += d;
    }
    h.complex_symmetric = true; // kinetic symmetric, all else diagonal
    return h;
}

} // namespace wstark
