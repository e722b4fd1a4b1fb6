#include "tcsim/spin_algebra.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace tcsim {

using std::complex;

SpinOperators build_spin_operators(int n_ions) {
    if (n_ions < 1) {
        throw std::invalid_argument("build_spin_operators: n_ions must be >= 1");
    }
    SpinOperators ops;
    ops.n_ions = n_ions;
    ops.j = 0.5 * n_ions;
    ops.dim = n_ions + 1;

    const int d = ops.dim;
    const double j = ops.j;

    ops.jp = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k + 1 < d; ++k) {
        const double m = -j + k;
        // <j,m+1| J+ |j,m> = sqrt(j(j+1) - m(m+1))
        ops.jp(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    ops.jm = ops.jp.adjoint();
    ops.jx = 0.5 * (ops.jp + ops.jm);
    ops.jy = complex<double>(0.0, -0.5) * (ops.jp - ops.jm);
    ops.jz = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        ops.jz(k, k) = -j + k;
    }
    return ops;
}

Eigen::MatrixXcd rotation_operator(double theta, const SpinOperators& ops) {
    if (ops.dim < 1) {
        throw std::invalid_argument("rotation_operator: operators not initialized");
    }
    // i(J+ - J-) is Hermitian, and exp(-theta(J+ - J-)) = exp(i theta [i(J+ - J-)]),
    // so the exponential comes from one eigendecomposition of the generator.
    const Eigen::MatrixXcd generator = complex<double>(0.0, 1.0) * (ops.jp - ops.jm);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(generator);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("rotation_operator: eigendecomposition failed");
    }
    Eigen::VectorXcd phases(ops.dim);
    for (int k = 0; k < ops.dim; ++k) {
        phases(k) = std::exp(complex<double>(0.0, theta * es.eigenvalues()(k)));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}
