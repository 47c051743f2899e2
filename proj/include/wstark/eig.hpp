#ifndef WSTARK_EIG_HPP
#define WSTARK_EIG_HPP

#include <Eigen/Dense>

namespace wstark {

struct EigenDecomposition {
    Eigen::VectorXcd values;  ///< eigenvalues, solver order
    Eigen::MatrixXcd vectors; ///< right eigenvectors, one per column
};

/// Dense non-hermitian eigensolve (all eigenvalues + right eigenvectors).
/// Throws std::runtime_error when the underlying LAPACK routine fails.
EigenDecomposition eig_dense(const Eigen::MatrixXcd& m);

} // namespace wstark

#endif
