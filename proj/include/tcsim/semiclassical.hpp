#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tcsim/model.hpp"

namespace tcsim {

// Classical phase-space coordinates of the scaled model. Time is measured in
// units of 1/(sqrt2 Omega) and the spin lives on a sphere of radius N/2.
struct PhasePoint {
    double x = 0.0;  // X quadrature
    double y = 0.0;  // Y quadrature
    double jx = 0.0;
    double jy = 0.0;
    double jz = 0.0;
};

struct SweepConfig {
    double chi = 0.0;
    int n_ions_equiv = 1;  // sets the spin radius N/2
    double t_end = 10.0;
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double dt = 1e-3;         // SDE step; also the deterministic output spacing
    std::uint64_t seed = 0;   // SDE ensemble seed
    double gamma = 0.0;       // heating rate
    int n_traj = 1;
    bool spin_frozen = false;  // validation mode: hold J at its initial value
};

//   dX/dt  = -Jy          dY/dt  = -Jx - chi
//   dJx/dt = -Y Jz        dJy/dt = -X Jz        dJz/dt = X Jy + Y Jx
PhasePoint eom_rhs(const PhasePoint& p, double chi);

// Conserved classical Hamiltonian H = X Jx - Y Jy + chi X.
double energy(const PhasePoint& p, double chi);
double spin_norm2(const PhasePoint& p);

struct Trajectory {
    std::vector<double> t;
    std::vector<PhasePoint> points;
    double max_spin_norm2_drift = 0.0;
    double max_energy_drift = 0.0;
};

// Adaptive embedded Runge-Kutta (Fehlberg 7/8) controlled by rel_tol/abs_tol,
// sampled every cfg.dt. Throws StiffnessError if the step size underflows.
Trajectory integrate(const PhasePoint& p0, const SweepConfig& cfg);

// (0, 0, -chi, 0, +sqrt(N^2/4 - chi^2)); throws NoFixedPointError when
// 2 chi / N > 1. The mirror point with Jz < 0 is also stationary but this is
// the branch whose instability sets the critical time scale.
PhasePoint fixed_point(double chi, int n_ions_equiv);

struct Linearization {
    Eigen::Matrix<double, 5, 5> jacobian;
    Eigen::Matrix<std::complex<double>, 5, 1> eigenvalues;
    double leading_growth_rate = 0.0;  // max real part
};

Linearization linearize(const PhasePoint& p, double chi);

// Rotation to the barred frame in which the zero-energy condition factorizes:
//   X = Xb cos(t) + Yb sin(t)      Y  = Yb cos(t) - Xb sin(t)
//   Jx = Jxb cos(t) - Jyb sin(t)   Jy = Jxb sin(t) + Jyb cos(t)
// canonical_transform maps unbarred -> barred; the inverse undoes it.
PhasePoint canonical_transform(const PhasePoint& p, double theta);
PhasePoint canonical_transform_inverse(const PhasePoint& barred, double theta);

// Hbar = Xb (Jxb + chi cos(theta)) - Yb (Jyb - chi sin(theta)); equals
// energy() of the corresponding unbarred point for every theta.
double transformed_energy(const PhasePoint& barred, double theta, double chi);

// Above threshold the zero-energy set contains two one-parameter families in
// the barred frame at theta = arccos(1/x):
//   family A: Xb = 0, Jyb =  chi sin(theta)   (Yb, Jxb, Jzb free)
//   family B: Yb = 0, Jxb = -chi cos(theta)   (Xb, Jyb, Jzb free)
struct ZeroEnergyCurve {
    double theta = 0.0;
    double chi = 0.0;
    double jy_bar_family_a = 0.0;
    double jx_bar_family_b = 0.0;

    PhasePoint barred_point_family_a(double y_bar, double jx_bar, double jz_bar) const;
    PhasePoint barred_point_family_b(double x_bar, double jy_bar, double jz_bar) const;
};

// Throws BelowThresholdError for x < 1; at x = 1 the curve collapses onto the
// fixed point (theta = 0).
ZeroEnergyCurve zero_energy_curve(const ModelParams& p);

struct EnsembleMoments {
    std::vector<double> t;
    std::vector<double> mean_x, mean_y;
    std::vector<double> var_x, var_y;        // unbiased across trajectories
    std::vector<double> stderr_x, stderr_y;  // standard error of the mean
    int n_traj = 0;
};

// Euler-Maruyama with noise sqrt(gamma) dW on X and Y only (independent
// Wiener processes, X drawn before Y each step). Trajectory k uses an RNG
// substream keyed by (seed, k), so results are reproducible and independent
// of scheduling. With gamma = 0 each path is exactly the deterministic Euler
// iteration.
EnsembleMoments sde_integrate(const PhasePoint& p0, const SweepConfig& cfg);

}
