#pragma once

#include <Eigen/Dense>

namespace tcsim {

// Harmonic-oscillator ladder and quadrature matrices truncated to Fock levels
// 0..n_max. The truncation artifact sits in the corner: <m|[a,a+]|m> = 1 for
// m < n_max but equals -n_max at m = n_max.
struct BosonOperators {
    int n_max = 0;
    int dim = 0;  // n_max + 1
    Eigen::MatrixXcd a, adag;
    Eigen::MatrixXcd x, y;  // x = (a + a+)/sqrt2, y = -i(a - a+)/sqrt2
    Eigen::MatrixXcd n;
};

BosonOperators build_boson_operators(int n_max);

struct SqueezeParams {
    double r = 0.0;
    double mu = 1.0;  // cosh r
    double nu = 0.0;  // sinh r
    static SqueezeParams from_r(double r);
};

// S(r) = exp((r/2)(a+^2 - a^2)). Sign convention: S^dag a S = mu a + nu a+,
// so r > 0 squeezes the y quadrature and stretches x. Emits a truncation
// warning when sinh^2 r > n_max/10.
Eigen::MatrixXcd squeeze_operator(double r, const BosonOperators& ops);

// S(r)|0>: support on even Fock levels only, <n> = sinh^2 r.
Eigen::VectorXcd squeezed_vacuum(double r, const BosonOperators& ops);

}
