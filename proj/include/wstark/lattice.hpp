#ifndef WSTARK_LATTICE_HPP
#define WSTARK_LATTICE_HPP

#include <Eigen/Dense>
#include <optional>

#include "wstark/types.hpp"

namespace wstark {

/// Bichromatic potential (V0/2)[cos x + delta cos(2x + phi)], 2pi-periodic.
inline double potential_value(double x, const LatticeParams& p) {
    return 0.5 * p.V0 * (std::cos(x) + p.delta * std::cos(2.0 * x + p.phi));
}

/// Monomial CAP profile W(x) = ((x_cap - x)/w)^order for x < x_cap, else 0,
/// with w the full CAP width. W ranges over [0, 1] inside the box.
inline double cap_profile(double x, const GridSpec& grid) {
    if (grid.cap_width == 0) return 0.0;
    const double onset = grid.cap_onset();
    if (x >= onset) return 0.0;
    return std::pow((onset - x) / grid.cap_length(), grid.cap_order);
}

/// Dense discretized Hamiltonian -1/2 d^2/dx^2 + V(x) + Fx - i eta W(x)
/// (+ g * density when supplied). Complex symmetric by construction.
struct HamiltonianMatrix {
    Eigen::MatrixXcd entries;
    bool complex_symmetric = false;
    int dimension() const { return static_cast<int>(entries.rows()); }
};

/// Real symmetric kinetic matrix for -1/2 d^2/dx^2 on the grid.
Eigen::MatrixXd kinetic_matrix(const GridSpec& grid);

HamiltonianMatrix build_hamiltonian(const LatticeParams& p, const GridSpec& grid,
                                    const std::optional<Eigen::VectorXd>& density = std::nullopt);

} // namespace wstark

#endif
