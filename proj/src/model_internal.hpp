#pragma once

#include <Eigen/Dense>

#include "eigh.hpp"
#include "tcsim/model.hpp"

namespace tcsim::detail {

// The driven Tavis-Cummings Hamiltonian is real symmetric in the product
// basis; tracking and scanning run on this representation for speed.
Eigen::MatrixXd build_hamiltonian_real(const ModelParams& p, int n_max);

struct ContinuationStep {
    Eigen::VectorXd state;
    double eigenvalue = 0.0;
    double overlap = 0.0;
};

// Diagonal of Jz on the product space, used to resolve degenerate clusters.
Eigen::VectorXd spin_projection_diagonal(const ProductSpace& space);

// Max-overlap continuation of `prev` (normalized) in the given spectrum.
// Eigenvalues degenerate at solver resolution form one cluster whose internal
// basis is arbitrary; diagonalizing Jz restricted to the cluster fixes a
// canonical basis, and the member with maximal overlap against prev continues
// the state. The zero-energy band is exactly diagonal in Jz (spin operators
// move the band's excitation ladder by at most one rung and the band sits on
// every other rung), so this keeps the tracked vector on one band member
// where a plain projection of prev would drift across the band.
ContinuationStep continue_eigenstate(const EighReal& es, const Eigen::VectorXd& jz_diag,
                                     const Eigen::VectorXd& prev);

double top_fock_occupancy(const Eigen::VectorXd& psi, const ProductSpace& space);

}
