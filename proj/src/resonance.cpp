#include "wstark/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "wstark/eig.hpp"

namespace wstark {

namespace {

/// c-normalize in place; returns false (near-defective) when v^T v underflows,
/// in which case v is left 2-normalized.
bool c_normalize(Eigen::VectorXcd& v) {
    v.normalize();
    const Complex c = v.transpose() * v; // bilinear, no conjugation
    if (std::abs(c) < 1e-12) return false;
    v /= std::sqrt(c);
    return true;
}

} // namespace

SpectrumSlice solve_resonances(const LatticeParams& p, const GridSpec& grid,
                               int n_keep, const SolverOptions& opts) {
    p.validate_for_resonances();
    if (p.g != 0.0)
        throw std::invalid_argument("solve_resonances: g must be 0 (nonlinear solves live elsewhere)");

    const HamiltonianMatrix h = build_hamiltonian(p, grid);
    const EigenDecomposition d = eig_dense(h.entries);
    const int n = grid.size();
    const double dx = grid.dx();
    Eigen::VectorXd xs(n);
    for (int i = 0; i < n; ++i) xs(i) = grid.x(i);

    const double cap_onset = grid.cap_onset();
    const double window_lo = grid.x_left() + kPeriod;
    const double window_hi = grid.x_right() - kPeriod;
    const double band_max = 0.5 * p.V0 * (1.0 + std::abs(p.delta)) + opts.band_energy_margin;

    SpectrumSlice s;
    s.params = p;
    s.grid = grid;
    s.eta_used = grid.cap_strength;

    for (int j = 0; j < n; ++j) {
        Resonance r;
        r.energy = d.values(j).real();
        r.gamma = -2.0 * d.values(j).imag();
        if (r.gamma <= 0.0) continue; // hermitian artifacts / box-bound states

        Eigen::VectorXcd v = d.vectors.col(j);
        const Eigen::VectorXd dens = v.cwiseAbs2();
        const double total = dens.sum();

        double leak = 0.0;
        int ipeak = 0;
        dens.maxCoeff(&ipeak);
        for (int i = 0; i < n && xs(i) < cap_onset; ++i) leak += dens(i);
        r.cap_leakage = leak / total;
        r.peak_position = xs(ipeak);

        if (r.cap_leakage >= opts.leak_threshold) continue;

        // Localization center. The bilinear (c-product) expectation of x is
        // the right measure for resonances: the oscillating outgoing tail
        // self-cancels, so broad states are assigned to their ladder site
        // even when the raw density max sits inside the absorber. Near a
        // coalescent pair v^T v -> 0 and the quotient degenerates (large
        // imaginary part, center outside the box); there the two hybrids
        // share one density profile and the raw peak is reliable instead.
        const Complex cc = (v.transpose() * v)(0);
        r.localization_center = r.peak_position;
        if (std::abs(cc) > 1e-12 * total) {
            const Complex xc = (v.transpose() * xs.asDiagonal() * v)(0) / cc;
            if (std::abs(xc.imag()) < kPi && xc.real() >= grid.x_left() &&
                xc.real() <= grid.x_right())
                r.localization_center = xc.real();
        }
        r.site_index = static_cast<int>(std::lround(r.localization_center / kPeriod));

        if (r.localization_center < window_lo || r.localization_center >= window_hi) continue;
        if (r.energy - p.F * r.localization_center >= band_max) continue;

        r.residual = (h.entries * v - d.values(j) * v).norm() / v.norm();
        if (r.residual >= opts.residual_tol) continue;

        r.near_defective = !c_normalize(v);
        r.right_vector = std::move(v);
        s.resonances.push_back(std::move(r));
    }

    if (s.resonances.empty())
        throw std::runtime_error(
            "solve_resonances: no physical resonance passed the filter (cap leakage < " +
            std::to_string(opts.leak_threshold) + "); the CAP may be swallowing every state");

    std::sort(s.resonances.begin(), s.resonances.end(),
              [](const Resonance& a, const Resonance& b) { return a.gamma < b.gamma; });
    if (n_keep > 0 && static_cast<int>(s.resonances.size()) > n_keep)
        s.resonances.resize(n_keep);

    if (s.resonances.size() >= 2) {
        const Complex d01 = s.resonances[0].eigenvalue() - s.resonances[1].eigenvalue();
        if (std::abs(d01) < opts.defective_tol) {
            s.resonances[0].near_defective = true;
            s.resonances[1].near_defective = true;
        }
    }
    return s;
}

std::array<Resonance, 2> central_pair(const SpectrumSlice& s) {
    // Classify by the c-product localization center rather than the raw
    // density peak: near a degeneracy the hybridized pair peaks close to the
    // cell boundary and the peak cell flickers with tiny parameter changes,
    // while <x> varies smoothly.
    std::vector<const Resonance*> central;
    for (const Resonance& r : s.resonances)
        if (r.site_index == 0) central.push_back(&r);
    if (central.size() < 2)
        throw std::runtime_error("central_pair: fewer than two physical resonances peak in the central cell");
    // s.resonances is gamma-sorted already.
    return {*central[0], *central[1]};
}

CapSelection select_cap_strength(const LatticeParams& p, const GridSpec& grid,
                                 double eta_min, double eta_max, int n_scan,
                                 double flatness_threshold) {
    if (n_scan < 3) throw std::invalid_argument("select_cap_strength: n_scan must be >= 3");
    std::vector<double> etas(n_scan), g1(n_scan);
    const double ratio = std::pow(eta_max / eta_min, 1.0 / (n_scan - 1));
    for (int i = 0; i < n_scan; ++i) {
        etas[i] = eta_min * std::pow(ratio, i);
        GridSpec g = grid;
        g.cap_strength = etas[i];
        g1[i] = central_pair(solve_resonances(p, g))[0].gamma;
    }
    double best = std::numeric_limits<double>::infinity();
    int ibest = -1;
    for (int i = 1; i + 1 < n_scan; ++i) {
        const double slope = std::abs(std::log(g1[i + 1] / g1[i - 1])) / (2.0 * std::log(ratio));
        if (slope < best) {
            best = slope;
            ibest = i;
        }
    }
    if (ibest < 0 || best > flatness_threshold)
        throw std::runtime_error("select_cap_strength: no plateau in Gamma(eta) (flatness " +
                                 std::to_string(best) + " > " + std::to_string(flatness_threshold) +
                                 "); enlarge the box or the CAP region");
    return {etas[ibest], best};
}

double overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw std::invalid_argument("overlap: zero vector");
    if (a.size() != b.size()) throw std::invalid_argument("overlap: length mismatch");
    return std::abs((a.adjoint() * b)(0)) / (na * nb);
}

double overlap(const Resonance& a, const Resonance& b) {
    return overlap(a.right_vector, b.right_vector);
}

double petermann(const Eigen::VectorXcd& v) {
    const double n2 = v.squaredNorm();
    if (n2 == 0.0) throw std::invalid_argument("petermann: zero vector");
    const Complex c = v.transpose() * v;
    if (std::abs(c) < 1e-12 * n2) return std::numeric_limits<double>::infinity();
    return (n2 * n2) / std::norm(c);
}

double petermann(const Resonance& a) { return petermann(a.right_vector); }

namespace {

/// |overlap| of a with b translated by k whole periods (k*ppp grid points).
double shifted_overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, int k, int ppp) {
    const int n = static_cast<int>(a.size());
    const int off = k * ppp;
    Eigen::VectorXcd bs = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < n; ++i) {
        const int j = i - off; // value of b at source grid point
        if (j >= 0 && j < n) bs(i) = b(j);
    }
    if (bs.norm() == 0.0) return 0.0;
    return overlap(a, bs);
}

} // namespace

SpectrumSlice label_ladders(SpectrumSlice s) {
    const double F = s.params.F;
    const int ppp = s.grid.points_per_period;
    const int m = static_cast<int>(s.resonances.size());
    if (m == 0) throw std::invalid_argument("label_ladders: empty spectrum slice");

    // Union-find over states: same ladder when energies differ by an integer
    // multiple of 2*pi*F and the translated vectors match.
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };

    const double e_tol = 1e-3 * std::max(1.0, kPeriod * F);
    for (int i = 0; i < m; ++i) {
        int matches = 0;
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const double de = s.resonances[i].energy - s.resonances[j].energy;
            const int k = static_cast<int>(std::lround(de / (kPeriod * F)));
            if (k == 0) continue;
            if (std::abs(de - k * kPeriod * F) > e_tol) continue;
            ++matches;
            if (shifted_overlap(s.resonances[i].right_vector, s.resonances[j].right_vector, k, ppp) > 0.9) {
                const int ri = find(i), rj = find(j);
                if (ri != rj) parent[ri] = rj;
            } else {
                // Energy matched a ladder rung but the vector did not: ambiguous.
                s.resonances[i].ladder_ambiguous = true;
            }
        }
        (void)matches;
    }

    // Collect ladders, order them by the smallest gamma of their members.
    std::vector<int> roots;
    for (int i = 0; i < m; ++i)
        if (std::find(roots.begin(), roots.end(), find(i)) == roots.end()) roots.push_back(find(i));
    std::sort(roots.begin(), roots.end(), [&](int a, int b) {
        double ga = std::numeric_limits<double>::infinity(), gb = ga;
        for (int i = 0; i < m; ++i) {
            if (find(i) == a) ga = std::min(ga, s.resonances[i].gamma);
            if (find(i) == b) gb = std::min(gb, s.resonances[i].gamma);
        }
        return ga < gb;
    });
    for (int i = 0; i < m; ++i) {
        const int alpha =
            static_cast<int>(std::find(roots.begin(), roots.end(), find(i)) - roots.begin()) + 1;
        s.resonances[i].ladder_index = alpha;
    }

    // Miniladder offsets: reduce each of the two most stable ladders to a
    // common site and split symmetrically about their mean.
    if (roots.size() >= 2) {
        double red[2];
        for (int a = 0; a < 2; ++a) {
            double acc = 0.0;
            int cnt = 0;
            for (int i = 0; i < m; ++i) {
                if (s.resonances[i].ladder_index != a + 1) continue;
                acc += s.resonances[i].energy - kPeriod * F * s.resonances[i].site_index;
                ++cnt;
            }
            red[a] = acc / cnt;
        }
        const double mean = 0.5 * (red[0] + red[1]);
        s.ladder_offsets = {red[0] - mean, red[1] - mean};
    }
    s.ladders_labeled = true;
    return s;
}

LandauZenerFit fit_landau_zener(const std::vector<std::pair<double, double>>& gammas,
                                double delta_E) {
    if (gammas.size() < 5)
        throw std::invalid_argument("fit_landau_zener: need at least 5 (F, Gamma) samples");
    const int n = static_cast<int>(gammas.size());
    Eigen::MatrixXd a(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        const auto [f, gam] = gammas[i];
        if (f <= 0.0 || gam <= 0.0)
            throw std::invalid_argument("fit_landau_zener: samples must have F > 0 and Gamma > 0");
        a(i, 0) = 1.0 / f;
        a(i, 1) = 1.0;
        y(i) = std::log(gam / f);
    }
    const Eigen::Vector2d c = a.colPivHouseholderQr().solve(y);
    LandauZenerFit fit;
    fit.slope = c(0);
    fit.intercept = c(1);
    fit.residual = std::sqrt((a * c - y).squaredNorm() / n);
    fit.expected_slope = -kPi * delta_E * delta_E;
    return fit;
}

double bloch_gap(const LatticeParams& p, int n_k, int n_plane_waves) {
    // Plane-wave basis e^{i(k+m)x}; V couples m -> m+-1 (V0/4) and
    // m -> m+-2 ((V0 delta/4) e^{+-i phi}).
    const int mmax = n_plane_waves / 2;
    const int dim = 2 * mmax + 1;
    const Complex c1(0.25 * p.V0, 0.0);
    const Complex c2 = 0.25 * p.V0 * p.delta * std::exp(Complex(0.0, p.phi));
    double gap = std::numeric_limits<double>::infinity();
    for (int ik = 0; ik < n_k; ++ik) {
        const double k = -0.5 + (ik + 0.5) / n_k; // Brillouin zone of the 2pi lattice
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
        for (int a = 0; a < dim; ++a) {
            const double q = k + (a - mmax);
            h(a, a) = 0.5 * q * q;
            if (a + 1 < dim) {
                h(a, a + 1) = c1;
                h(a + 1, a) = std::conj(c1);
            }
            if (a + 2 < dim) {
                h(a, a + 2) = std::conj(c2);
                h(a + 2, a) = c2;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
        gap = std::min(gap, es.eigenvalues()(1) - es.eigenvalues()(0));
    }
    return gap;
}

} // namespace wstark
