#pragma once

#include <Eigen/Dense>

namespace tcsim {

// Collective angular-momentum matrices for N two-level ions on the symmetric
// (Dicke) subspace |j,m>, j = N/2. Basis ordering is m ascending from -j, so
// index 0 is the fully de-excited state |j,-j>.
struct SpinOperators {
    int n_ions = 0;
    double j = 0.0;
    int dim = 0;  // N + 1
    Eigen::MatrixXcd jp, jm;
    Eigen::MatrixXcd jx, jy, jz;
};

SpinOperators build_spin_operators(int n_ions);

// R(theta) = exp(-theta (J+ - J-)), i.e. a rotation by 2*theta about Jy.
// Sign convention (fixed numerically against the semiclassical fixed point):
//   R^dag Jz R = cos(2 theta) Jz - sin(2 theta) Jx
//   R^dag Jx R = cos(2 theta) Jx + sin(2 theta) Jz
// so the rotated lowest state R|j,-j> carries <Jx> = -j sin(2 theta).
Eigen::MatrixXcd rotation_operator(double theta, const SpinOperators& ops);

}
