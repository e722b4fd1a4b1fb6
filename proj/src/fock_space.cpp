#include "tcsim/fock_space.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "tcsim/diagnostics.hpp"

namespace tcsim {

using std::complex;

BosonOperators build_boson_operators(int n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("build_boson_operators: n_max must be >= 1");
    }
    BosonOperators ops;
    ops.n_max = n_max;
    ops.dim = n_max + 1;

    const int d = ops.dim;
    ops.a = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) {
        ops.a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    ops.adag = ops.a.adjoint();

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    ops.x = inv_sqrt2 * (ops.a + ops.adag);
    ops.y = complex<double>(0.0, -inv_sqrt2) * (ops.a - ops.adag);

    ops.n = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        ops.n(n, n) = static_cast<double>(n);
    }
    return ops;
}

SqueezeParams SqueezeParams::from_r(double r) {
    SqueezeParams p;
    p.r = r;
    p.mu = std::cosh(r);
    p.nu = std::sinh(r);
    return p;
}

Eigen::MatrixXcd squeeze_operator(double r, const BosonOperators& ops) {
    if (ops.dim < 2) {
        throw std::invalid_argument("squeeze_operator: operators not initialized");
    }
    if (!std::isfinite(r)) {
        throw std::invalid_argument("squeeze_operator: r must be finite");
    }
    const double occupation = std::sinh(r) * std::sinh(r);
    if (occupation > 0.1 * ops.n_max) {
        std::ostringstream msg;
        msg << "squeeze_operator: sinh^2(r) = " << occupation
            << " exceeds n_max/10 = " << 0.1 * ops.n_max
            << "; truncated Fock space is too small for r = " << r;
        emit_warning(msg.str());
    }
    // (r/2)(a+^2 - a^2) = -i r K with K = (i/2)(a+^2 - a^2) Hermitian.
    const Eigen::MatrixXcd k_generator =
        complex<double>(0.0, 0.5) * (ops.adag * ops.adag - ops.a * ops.a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k_generator);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("squeeze_operator: eigendecomposition failed");
    }
    Eigen::VectorXcd phases(ops.dim);
    for (int k = 0; k < ops.dim; ++k) {
        phases(k) = std::exp(complex<double>(0.0, -r * es.eigenvalues()(k)));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::VectorXcd squeezed_vacuum(double r, const BosonOperators& ops) {
    Eigen::VectorXcd vacuum = Eigen::VectorXcd::Zero(ops.dim);
    vacuum(0) = 1.0;
    Eigen::VectorXcd state = squeeze_operator(r, ops) * vacuum;
    return state / state.norm();
}

}
