#pragma once

#include <Eigen/Dense>

#include "tcsim/fock_space.hpp"
#include "tcsim/model.hpp"
#include "tcsim/spin_algebra.hpp"

namespace tcsim {

// Below threshold the zero-energy eigenstate is the exact product
//   S(r) R(theta) |j,-j> (x) |0>
// with sin(2 theta) = x and cos(2 theta) = e^{-2r} = sqrt(1 - x^2).
struct AnsatzSolution {
    double theta = 0.0;
    SqueezeParams squeeze;
    Regime regime = Regime::Below;
    double x = 0.0;
};

// Throws AboveThresholdError for x > 1. At x = 1 the returned solution is
// tagged Critical and carries an infinite squeeze parameter (no normalizable
// state exists there).
AnsatzSolution solve_ansatz(const ModelParams& p);

// Throws std::invalid_argument for a Critical solution.
Eigen::VectorXcd build_ansatz_state(const AnsatzSolution& sol,
                                    const SpinOperators& spin,
                                    const BosonOperators& boson);

// ||H psi|| for a normalized psi; the ansatz claims eigenvalue 0.
double residual(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi);

// Scaled moments (<Jy>, <Jz>, <Jx>) / (N/2) of the zero-energy state:
//   x <  1: ( 0,              -sqrt(1-x^2),  -x   )
//   x >= 1: (-sqrt(1-1/x^2),   0,            -1/x )
// Both branches meet at (0, 0, -1) at x = 1.
struct ScaledMoments {
    double jy = 0.0;
    double jz = 0.0;
    double jx = 0.0;
};

ScaledMoments analytic_scaled_moments(double x);

}
