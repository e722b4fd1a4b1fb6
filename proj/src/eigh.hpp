#pragma once

#include <Eigen/Dense>

namespace tcsim::detail {

// Dense symmetric/Hermitian eigendecompositions, eigenvalues ascending.
// The real path is LAPACKE dsyevd when available (the tracked Hamiltonians
// are real symmetric and reach dim > 2000); otherwise Eigen's solver.

struct EighReal {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // columns, orthonormal
};

EighReal eigh(const Eigen::MatrixXd& sym);

struct EighComplex {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
};

EighComplex eigh(const Eigen::MatrixXcd& herm);

}
