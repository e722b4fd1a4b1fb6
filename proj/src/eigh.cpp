#include "eigh.hpp"

#include <stdexcept>

#ifdef TCSIM_HAVE_LAPACKE
#define LAPACK_COMPLEX_CPP
#include <lapacke.h>
#endif

namespace tcsim::detail {

EighReal eigh(const Eigen::MatrixXd& sym) {
    const int n = static_cast<int>(sym.rows());
    if (n == 0 || sym.cols() != n) {
        throw std::invalid_argument("eigh: matrix must be square and non-empty");
    }
#ifdef TCSIM_HAVE_LAPACKE
    EighReal out;
    out.eigenvalues.resize(n);
    out.eigenvectors = sym;  // overwritten with eigenvectors
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.eigenvectors.data(), n,
                       out.eigenvalues.data());
    if (info != 0) {
        throw std::runtime_error("eigh: dsyevd failed, info = " + std::to_string(info));
    }
    return out;
#else
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eigh: eigendecomposition failed");
    }
    return {es.eigenvalues(), es.eigenvectors()};
#endif
}

EighComplex eigh(const Eigen::MatrixXcd& herm) {
    const int n = static_cast<int>(herm.rows());
    if (n == 0 || herm.cols() != n) {
        throw std::invalid_argument("eigh: matrix must be square and non-empty");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eigh: eigendecomposition failed");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

}
