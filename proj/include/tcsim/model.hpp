#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tcsim/fock_space.hpp"
#include "tcsim/spin_algebra.hpp"

namespace tcsim {

enum class Regime { Below, Critical, Above };

// Driven Tavis-Cummings model (hbar = 1):
//   H = Omega (a J+ + a+ J-) + E (a + a+)
// The control parameter is x = 2E/(N Omega); dividing by sqrt2*Omega gives
// the scaled form X Jx - Y Jy + chi X with chi = E/Omega, which measures time
// in units of 1/(sqrt2 Omega).
struct ModelParams {
    int n_ions = 1;
    double coupling = 1.0;  // Omega > 0
    double drive = 0.0;     // E >= 0

    double chi() const { return drive / coupling; }
    double x() const { return 2.0 * drive / (n_ions * coupling); }
    Regime regime() const;

    static ModelParams from_x(int n_ions, double coupling, double x);
    void validate() const;
};

// Composite index convention: spin index slow, Fock index fast.
struct ProductSpace {
    int spin_dim = 0;
    int fock_dim = 0;
    int total_dim() const { return spin_dim * fock_dim; }
    int index(int spin_index, int fock_index) const {
        return spin_index * fock_dim + fock_index;
    }
};

// kron(spin_op, boson_op) in the index convention above.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& spin_op, const Eigen::MatrixXcd& boson_op);

Eigen::MatrixXcd build_hamiltonian(const ModelParams& p, int n_max);

// X Jx - Y Jy + chi X, assembled from quadrature and spin matrices. Equals
// build_hamiltonian / (sqrt2 Omega) up to rounding.
Eigen::MatrixXcd build_scaled_hamiltonian(const ModelParams& p, int n_max);

// |j,-j> (x) |0>, the exact zero-energy eigenstate at E = 0.
Eigen::VectorXcd ground_product_state(const ProductSpace& space);

// Builds the full 2^N (x) Fock Hamiltonian from single-ion raising/lowering
// operators, compresses it with the Dicke isometry and returns the max-norm
// mismatch against the collective Hamiltonian. N <= 3 only (cost 2^N).
double symmetric_subspace_oracle(const ModelParams& p, int n_max);

struct TrackedState {
    Eigen::VectorXcd state;
    double eigenvalue = 0.0;
    double overlap = 1.0;        // |<state|previous step's state>|
    double top_occupancy = 0.0;  // population of the highest Fock level
};

struct TrackOptions {
    double overlap_fail = 0.5;
    double max_x_step = 0.05;
};

// Follows the zero-energy eigenstate along a drive sweep starting at E = 0.
// Selection is by maximal overlap with the previous step; eigenvalues that
// are degenerate at solver resolution are treated as one cluster and the
// previous state is projected onto the cluster span (the truncated model has
// an exactly degenerate zero eigenspace, so plain single-vector matching is
// ill-posed). Throws ContinuationError when the best overlap drops below
// options.overlap_fail.
std::vector<TrackedState> track_zero_state(const std::vector<ModelParams>& sweep,
                                           int n_max,
                                           const TrackOptions& options = {});

}
