#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "tcsim/model.hpp"

namespace tcsim {

// Density operator on the ion-mode product space, stored dense.
struct DensityOp {
    Eigen::MatrixXcd matrix;
    ProductSpace space;

    double trace_real() const;
    // max |W - W^dag| entry, should sit at rounding level for physical states
    double hermiticity_error() const;
    double min_eigenvalue() const;

    static DensityOp pure(const Eigen::VectorXcd& psi, const ProductSpace& space);
};

// Couplings for open-system evolution.  coupling may be zero (pure heating);
// gamma is the phonon heating rate from electric-field noise on the trap.
// Hilbert-space dimensions always come from the state being evolved.
struct HeatingParams {
    double coupling = 1.0;  // Omega
    double drive = 0.0;     // E
    double gamma = 0.0;     // heating rate

    void validate() const;
};

// D[A] W = 2 A W A^dag - A^dag A W - W A^dag A
Eigen::MatrixXcd dissipator(const Eigen::MatrixXcd& a_op, const Eigen::MatrixXcd& w);

// dW/dt = -i [H, W] + (gamma/2) (D[a] + D[a^dag]) W with H the driven
// ion-mode Hamiltonian at the given couplings, on w's product space.
Eigen::MatrixXcd master_rhs(const DensityOp& w, const HeatingParams& params);

// 1e-3 / max(coupling, drive, gamma), clamped to 1e-3 when all rates vanish.
double default_master_dt(const HeatingParams& params);

struct MasterOptions {
    double t_end = 1.0;
    double dt = 0.0;        // <= 0 picks default_master_dt
    long sample_stride = 0; // <= 0 targets ~400 samples
};

struct MasterTrajectory {
    std::vector<double> t;
    std::vector<double> n_mean;
    std::vector<std::complex<double>> a_mean;
    std::vector<double> jz_mean;
    std::vector<double> trace;
    std::vector<double> purity;   // tr(W^2)
    std::vector<double> min_eig;
    DensityOp final_state;
};

// Fixed-step RK4 on the master equation.  Throws AccuracyError if the trace
// drifts from 1 by more than 1e-6, TruncationError if the expected phonon
// growth n0 + gamma t_end exceeds a quarter of the Fock cutoff.
MasterTrajectory evolve_master(const DensityOp& w0, const HeatingParams& params,
                               const MasterOptions& options);

}
