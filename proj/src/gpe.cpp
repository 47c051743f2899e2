#include "wstark/gpe.hpp"

#include <cmath>
#include <stdexcept>

#include "wstark/eig.hpp"

namespace wstark {

namespace {

/// Density of v scaled so its integral over the central period [-pi, pi)
/// equals 1; g then carries the full interaction scale.
Eigen::VectorXd normalized_density(const Eigen::VectorXcd& v, const GridSpec& grid) {
    Eigen::VectorXd d = v.cwiseAbs2();
    double central = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        if (x >= -kPi && x < kPi) central += d(i);
    }
    central *= grid.dx();
    if (central <= 0.0)
        throw std::runtime_error("normalized_density: no density in the central period");
    return d / central;
}

} // namespace

NonlinearResonance solve_nonlinear(const LatticeParams& p, const GridSpec& grid,
                                   const Resonance& seed, const GpeOptions& opts) {
    p.validate_for_resonances();
    if (seed.right_vector.size() != grid.size())
        throw std::invalid_argument("solve_nonlinear: seed vector does not match the grid");

    LatticeParams lin = p;
    lin.g = 0.0;

    NonlinearResonance out;
    out.g_used = p.g;

    Eigen::VectorXcd prev_vec = seed.right_vector;
    Complex prev_mu = seed.eigenvalue();
    Eigen::VectorXd dens = normalized_density(prev_vec, grid);

    const int max_iter = (p.g == 0.0) ? 1 : opts.max_iterations;
    for (int it = 1; it <= max_iter; ++it) {
        HamiltonianMatrix h = build_hamiltonian(lin, grid);
        if (p.g != 0.0)
            for (int i = 0; i < grid.size(); ++i) h.entries(i, i) += Complex(p.g * dens(i), 0.0);
        const EigenDecomposition d = eig_dense(h.entries);

        // Select the eigenpair closest in identity to the previous iterate.
        int best = -1;
        double best_ov = -1.0;
        for (int j = 0; j < grid.size(); ++j) {
            const double ov = overlap(prev_vec, Eigen::VectorXcd(d.vectors.col(j)));
            if (ov > best_ov) {
                best_ov = ov;
                best = j;
            }
        }
        if (best_ov < opts.identity_threshold)
            throw std::runtime_error("solve_nonlinear: state identity lost (overlap " +
                                     std::to_string(best_ov) + " < " +
                                     std::to_string(opts.identity_threshold) +
                                     "); the nonlinear branch jumped");

        const Complex mu = d.values(best);
        Eigen::VectorXcd vec = d.vectors.col(best);
        out.iterations = it;
        out.residual = std::abs(mu - prev_mu);
        prev_mu = mu;
        prev_vec = vec;

        const Eigen::VectorXd cand = normalized_density(vec, grid);
        dens = (1.0 - opts.relaxation) * dens + opts.relaxation * cand;

        if (p.g == 0.0 || out.residual < opts.sc_tol) {
            out.mu = mu;
            // Report the state scaled to the density normalization convention:
            // integral of |psi|^2 over the central period equals 1.
            const Eigen::VectorXd nd = normalized_density(vec, grid);
            out.right_vector = vec * std::sqrt(nd.sum() / vec.cwiseAbs2().sum());
            out.density = nd;
            return out;
        }
    }
    throw std::runtime_error("solve_nonlinear: no self-consistency after " +
                             std::to_string(opts.max_iterations) +
                             " iterations; try a smaller relaxation factor");
}

CrossingReport classify_crossing(const std::vector<std::tuple<double, Complex, Complex>>& scan,
                                 const CrossingThresholds& thr) {
    if (scan.size() < 3) throw std::invalid_argument("classify_crossing: need >= 3 scan points");
    for (size_t i = 1; i < scan.size(); ++i)
        if (std::get<0>(scan[i]) <= std::get<0>(scan[i - 1]))
            throw std::invalid_argument("classify_crossing: scan must be strictly increasing in F");

    CrossingReport rep;
    rep.f_lo = std::get<0>(scan.front());
    rep.f_hi = std::get<0>(scan.back());

    bool real_crosses = false, imag_crosses = false;
    double min_re = std::numeric_limits<double>::infinity();
    double min_im = min_re;
    double prev_re = 0.0, prev_im = 0.0;
    for (size_t i = 0; i < scan.size(); ++i) {
        const auto& [f, m1, m2] = scan[i];
        const double dre = m1.real() - m2.real();
        const double dim = -2.0 * (m1.imag() - m2.imag()); // Gamma1 - Gamma2
        min_re = std::min(min_re, std::abs(dre));
        min_im = std::min(min_im, std::abs(dim));
        if (i > 0) {
            if (dre == 0.0 || dre * prev_re < 0.0) real_crosses = true;
            if (dim == 0.0 || dim * prev_im < 0.0) imag_crosses = true;
        }
        prev_re = dre;
        prev_im = dim;
    }
    rep.closest_approach_real = min_re;
    rep.closest_approach_imag = min_im;

    const bool real_degenerate = real_crosses || min_re < thr.degeneracy_tol;
    const bool imag_degenerate = imag_crosses || min_im < thr.degeneracy_tol;
    if (real_degenerate && imag_degenerate)
        rep.type = CrossingType::Degenerate;
    else if (imag_crosses && !real_crosses)
        rep.type = CrossingType::TypeI;
    else if (real_crosses && !imag_crosses)
        rep.type = CrossingType::TypeII;
    else
        throw std::domain_error("classify_crossing: neither real nor imaginary parts cross in the window");
    return rep;
}

double nonlinear_petermann(const LatticeParams& p, const GridSpec& grid,
                           const NonlinearResonance& state) {
    // Frozen-density linearization: H[n_conv] is complex symmetric, so the
    // linear-module left-vector rule applies unchanged.
    LatticeParams lin = p;
    lin.g = 0.0;
    HamiltonianMatrix h = build_hamiltonian(lin, grid);
    for (int i = 0; i < grid.size(); ++i)
        h.entries(i, i) += Complex(p.g * state.density(i), 0.0);
    const EigenDecomposition d = eig_dense(h.entries);
    int best = -1;
    double best_ov = -1.0;
    for (int j = 0; j < grid.size(); ++j) {
        const double ov = overlap(state.right_vector, Eigen::VectorXcd(d.vectors.col(j)));
        if (ov > best_ov) {
            best_ov = ov;
            best = j;
        }
    }
    return petermann(Eigen::VectorXcd(d.vectors.col(best)));
}

} // namespace wstark
