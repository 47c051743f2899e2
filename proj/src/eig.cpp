#include "wstark/eig.hpp"

#include <lapacke.h>

#include <stdexcept>
#include <string>

namespace wstark {

EigenDecomposition eig_dense(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eig_dense: matrix must be square");
    const lapack_int n = static_cast<lapack_int>(m.rows());

    // zgeev overwrites its input; work on a column-major copy.
    Eigen::MatrixXcd a = m;
    EigenDecomposition d;
    d.values.resize(n);
    d.vectors.resize(n, n);

    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', 'V', n,
        reinterpret_cast<lapack_complex_double*>(a.data()), n,
        reinterpret_cast<lapack_complex_double*>(d.values.data()),
        nullptr, 1,
        reinterpret_cast<lapack_complex_double*>(d.vectors.data()), n);
    if (info != 0)
        throw std::runtime_error("eig_dense: zgeev failed with info=" + std::to_string(info));
    return d;
}

} // namespace wstark
