#ifndef WSTARK_SIMPLEX_HPP
#define WSTARK_SIMPLEX_HPP

#include <Eigen/Dense>
#include <functional>

namespace wstark {

struct SimplexOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double initial_edge = 0.05;   ///< per-coordinate offset of the start simplex
    double diameter_tol = 1e-5;   ///< convergence on simplex diameter, not on f
    int max_iterations = 400;
    int restarts = 1;             ///< automatic restarts from the best vertex
};

struct SimplexResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;      ///< total over all restarts
    int evaluations = 0;
    bool converged = false;  ///< diameter fell below tolerance
};

/// Derivative-free Nelder-Mead minimization. The objective may be
/// non-smooth (square-root cusps are expected at the minima we hunt);
/// convergence is therefore judged on the simplex diameter alone.
SimplexResult minimize_simplex(const std::function<double(const Eigen::VectorXd&)>& f,
                               const Eigen::VectorXd& start,
                               const SimplexOptions& opts = {});

} // namespace wstark

#endif
