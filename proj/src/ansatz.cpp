#include "tcsim/ansatz.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tcsim/errors.hpp"

namespace tcsim {

AnsatzSolution solve_ansatz(const ModelParams& p) {
    p.validate();
    const double x = p.x();
    AnsatzSolution sol;
    sol.x = x;
    sol.regime = p.regime();
    if (sol.regime == Regime::Above) {
        std::ostringstream msg;
        msg << "solve_ansatz: no normalizable product ansatz above threshold (x = " << x
            << ")";
        throw AboveThresholdError(msg.str());
    }
    if (sol.regime == Regime::Critical) {
        sol.theta = 0.25 * M_PI;
        sol.squeeze.r = std::numeric_limits<double>::infinity();
        sol.squeeze.mu = std::numeric_limits<double>::infinity();
        sol.squeeze.nu = std::numeric_limits<double>::infinity();
        return sol;
    }
    // sin(2 theta) = x fixes the rotation; cos(2 theta) = e^{-2r} fixes the squeeze.
    sol.theta = 0.5 * std::asin(x);
    const double cos2theta = std::sqrt(1.0 - x * x);
    sol.squeeze = SqueezeParams::from_r(-0.5 * std::log(cos2theta));
    return sol;
}

Eigen::VectorXcd build_ansatz_state(const AnsatzSolution& sol,
                                    const SpinOperators& spin,
                                    const BosonOperators& boson) {
    if (!std::isfinite(sol.squeeze.r)) {
        throw std::invalid_argument(
            "build_ansatz_state: squeeze parameter diverges (critical or invalid solution)");
    }
    Eigen::VectorXcd spin_ground = Eigen::VectorXcd::Zero(spin.dim);
    spin_ground(0) = 1.0;  // |j,-j>
    const Eigen::VectorXcd spin_part = rotation_operator(sol.theta, spin) * spin_ground;
    const Eigen::VectorXcd boson_part = squeezed_vacuum(sol.squeeze.r, boson);

    Eigen::VectorXcd psi(spin.dim * boson.dim);
    for (int k = 0; k < spin.dim; ++k) {
        psi.segment(k * boson.dim, boson.dim) = spin_part(k) * boson_part;
    }
    return psi / psi.norm();
}

double residual(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi) {
    if (h.rows() != h.cols() || h.rows() != psi.size()) {
        throw std::invalid_argument("residual: dimension mismatch");
    }
    return (h * psi).norm();
}

ScaledMoments analytic_scaled_moments(double x) {
    if (x < 0.0 || !std::isfinite(x)) {
        throw std::invalid_argument("analytic_scaled_moments: x must be >= 0 and finite");
    }
    ScaledMoments m;
    if (x < 1.0) {
        m.jy = 0.0;
        m.jz = -std::sqrt(1.0 - x * x);
        m.jx = -x;
    } else {
        m.jy = -std::sqrt(1.0 - 1.0 / (x * x));
        m.jz = 0.0;
        m.jx = -1.0 / x;
    }
    return m;
}

}
