#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcsim/ansatz.hpp"
#include "tcsim/model.hpp"

namespace tcsim {

std::complex<double> expectation(const Eigen::MatrixXcd& op, const Eigen::VectorXcd& state);
std::complex<double> expectation(const Eigen::MatrixXcd& op, const Eigen::MatrixXcd& rho);

// Var of Q(phi) = cos(phi) X + sin(phi) Y in the given (normalized) state.
double quadrature_variance(const Eigen::VectorXcd& state, const Eigen::MatrixXcd& x_op,
                           const Eigen::MatrixXcd& y_op, double phi);

struct MinQuadrature {
    double phi = 0.0;       // minimizing angle, reduced to [0, pi)
    double variance = 0.0;
};

// Coarse scan over [0, pi) followed by golden-section refinement of the
// bracketed minimum to 1e-10 in phi.
MinQuadrature min_quadrature_variance(const Eigen::VectorXcd& state,
                                      const Eigen::MatrixXcd& x_op,
                                      const Eigen::MatrixXcd& y_op);

// One drive value of a phase-transition scan.  Numeric columns are empty
// from the first continuation failure onward; the ansatz columns exist below
// threshold only.  Spin moments are scaled by j = N/2.
struct ScanRow {
    double x = 0.0;
    std::optional<double> jx_num, jy_num, jz_num;
    double jx_an = 0.0, jy_an = 0.0, jz_an = 0.0;
    std::optional<double> var_min;
    std::optional<double> r_ansatz;
    std::optional<double> residual;   // |H psi_ansatz| / (sqrt2 Omega)
    std::optional<double> eigenvalue; // of the physical H, tracked state
    std::optional<double> overlap;    // continuation overlap at this x
};

struct ScanResult {
    std::vector<ScanRow> rows;
    std::optional<double> failure_x;  // where continuation first failed
};

// Tracks the zero-energy state from x = 0 through the grid (ascending, first
// point below threshold), refining internally so no tracking step exceeds
// track_step in x.  A continuation failure degrades later rows to their
// analytic columns instead of throwing.
ScanResult scan_phase_transition(int n_ions, double coupling,
                                 const std::vector<double>& x_grid, int n_max,
                                 double track_step = 0.02);

// Linear drive ramp x(t) = x_final * min(t / ramp_time, 1).
struct RampDescriptor {
    double x_final = 1.5;
    double ramp_time = 50.0;
};

struct SweepSample {
    double t = 0.0;
    double x = 0.0;
    double fidelity = 0.0;  // |<tracked zero state|psi(t)>|^2
    double energy = 0.0;    // <psi|H(t)|psi>
    double var_min = 0.0;   // minimal quadrature variance of the mode marginal
    double leak = 0.0;      // population of the top Fock level
};

struct AdiabaticResult {
    std::vector<SweepSample> samples;
    std::vector<std::string> warnings;
    Eigen::VectorXcd final_state;
};

// Schrodinger evolution under the ramped drive (fixed-step RK4, drive held at
// each step's midpoint value).  sample_dt <= 0 picks ~400 samples.
AdiabaticResult adiabatic_sweep(int n_ions, double coupling, const RampDescriptor& ramp,
                                double t_end, double dt, int n_max,
                                double sample_dt = 0.0);

}
