#include "tcsim/semiclassical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "tcsim/errors.hpp"

namespace tcsim {

namespace {

using State = std::array<double, 5>;

State to_state(const PhasePoint& p) { return {p.x, p.y, p.jx, p.jy, p.jz}; }
PhasePoint to_point(const State& s) { return {s[0], s[1], s[2], s[3], s[4]}; }

void rhs_into(const State& s, State& dsdt, double chi) {
    dsdt[0] = -s[3];
    dsdt[1] = -s[2] - chi;
    dsdt[2] = -s[1] * s[4];
    dsdt[3] = -s[0] * s[4];
    dsdt[4] = s[0] * s[3] + s[1] * s[2];
}

long step_count(double t_end, double dt) {
    return static_cast<long>(std::ceil(t_end / dt - 1e-9));
}

}  // namespace

PhasePoint eom_rhs(const PhasePoint& p, double chi) {
    State s = to_state(p);
    State d;
    rhs_into(s, d, chi);
    return to_point(d);
}

double energy(const PhasePoint& p, double chi) {
    return p.x * p.jx - p.y * p.jy + chi * p.x;
}

double spin_norm2(const PhasePoint& p) {
    return p.jx * p.jx + p.jy * p.jy + p.jz * p.jz;
}

Trajectory integrate(const PhasePoint& p0, const SweepConfig& cfg) {
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be positive");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) {
        throw std::invalid_argument("integrate: tolerances must be positive");
    }

    namespace odeint = boost::numeric::odeint;
    auto system = [chi = cfg.chi](const State& s, State& dsdt, double) {
        rhs_into(s, dsdt, chi);
    };
    auto stepper = odeint::make_controlled(cfg.abs_tol, cfg.rel_tol,
                                           odeint::runge_kutta_fehlberg78<State>());

    const double e0 = energy(p0, cfg.chi);
    const double sn0 = spin_norm2(p0);
    const long n_samples = step_count(cfg.t_end, cfg.dt);

    Trajectory traj;
    traj.t.reserve(n_samples + 1);
    traj.points.reserve(n_samples + 1);
    traj.t.push_back(0.0);
    traj.points.push_back(p0);

    State s = to_state(p0);
    double t = 0.0;
    double dt_try = cfg.dt;

    for (long k = 1; k <= n_samples; ++k) {
        const double t_target = (k == n_samples) ? cfg.t_end : k * cfg.dt;
        while (t_target - t > 1e-12 * std::max(1.0, std::abs(t_target))) {
            double dt_step = std::min(dt_try, t_target - t);
            const bool capped = dt_step < dt_try;
            const auto outcome = stepper.try_step(system, s, t, dt_step);
            if (outcome == odeint::success) {
                if (!capped) dt_try = dt_step;  // adopt the grown suggestion
            } else {
                dt_try = dt_step;  // rejected: adopt the reduction
                if (dt_try < 1e-14 * std::max(1.0, std::abs(t))) {
                    std::ostringstream msg;
                    msg << "integrate: step size underflow at t = " << t;
                    throw StiffnessError(t, msg.str());
                }
            }
        }
        const PhasePoint p = to_point(s);
        traj.t.push_back(t_target);
        traj.points.push_back(p);
        traj.max_energy_drift =
            std::max(traj.max_energy_drift, std::abs(energy(p, cfg.chi) - e0));
        traj.max_spin_norm2_drift =
            std::max(traj.max_spin_norm2_drift, std::abs(spin_norm2(p) - sn0));
    }
    return traj;
}

PhasePoint fixed_point(double chi, int n_ions_equiv) {
    if (n_ions_equiv < 1) {
        throw std::invalid_argument("fixed_point: n_ions_equiv must be >= 1");
    }
    if (chi < 0.0 || !std::isfinite(chi)) {
        throw std::invalid_argument("fixed_point: chi must be >= 0 and finite");
    }
    const double radius = 0.5 * n_ions_equiv;
    if (chi > radius) {
        std::ostringstream msg;
        msg << "fixed_point: no stationary point for 2 chi / N = " << chi / radius
            << " > 1 (chi = " << chi << ", N = " << n_ions_equiv << ")";
        throw NoFixedPointError(msg.str());
    }
    return {0.0, 0.0, -chi, 0.0, std::sqrt(radius * radius - chi * chi)};
}

Linearization linearize(const PhasePoint& p, double chi) {
    (void)chi;  // enters the flow only as an additive constant
    Eigen::Matrix<double, 5, 5> m = Eigen::Matrix<double, 5, 5>::Zero();
    // Row order (dX, dY, dJx, dJy, dJz), column order (X, Y, Jx, Jy, Jz).
    m(0, 3) = -1.0;
    m(1, 2) = -1.0;
    m(2, 1) = -p.jz;
    m(2, 4) = -p.y;
    m(3, 0) = -p.jz;
    m(3, 4) = -p.x;
    m(4, 0) = p.jy;
    m(4, 1) = p.jx;
    m(4, 2) = p.y;
    m(4, 3) = p.x;

    Linearization lin;
    lin.jacobian = m;
    Eigen::EigenSolver<Eigen::Matrix<double, 5, 5>> es(m);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("linearize: eigensolver failed");
    }
    lin.eigenvalues = es.eigenvalues();
    lin.leading_growth_rate = es.eigenvalues().real().maxCoeff();
    return lin;
}

PhasePoint canonical_transform(const PhasePoint& p, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    PhasePoint b;
    b.x = c * p.x - s * p.y;
    b.y = s * p.x + c * p.y;
    b.jx = c * p.jx + s * p.jy;
    b.jy = -s * p.jx + c * p.jy;
    b.jz = p.jz;
    return b;
}

PhasePoint canonical_transform_inverse(const PhasePoint& barred, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    PhasePoint p;
    p.x = c * barred.x + s * barred.y;
    p.y = c * barred.y - s * barred.x;
    p.jx = c * barred.jx - s * barred.jy;
    p.jy = s * barred.jx + c * barred.jy;
    p.jz = barred.jz;
    return p;
}

double transformed_energy(const PhasePoint& barred, double theta, double chi) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return barred.x * (barred.jx + chi * c) - barred.y * (barred.jy - chi * s);
}

PhasePoint ZeroEnergyCurve::barred_point_family_a(double y_bar, double jx_bar,
                                                  double jz_bar) const {
    return {0.0, y_bar, jx_bar, jy_bar_family_a, jz_bar};
}

PhasePoint ZeroEnergyCurve::barred_point_family_b(double x_bar, double jy_bar,
                                                  double jz_bar) const {
    return {x_bar, 0.0, jx_bar_family_b, jy_bar, jz_bar};
}

ZeroEnergyCurve zero_energy_curve(const ModelParams& p) {
    p.validate();
    const double x = p.x();
    if (x < 1.0) {
        std::ostringstream msg;
        msg << "zero_energy_curve: defined at or above threshold only (x = " << x << ")";
        throw BelowThresholdError(msg.str());
    }
    ZeroEnergyCurve curve;
    curve.theta = std::acos(1.0 / x);
    curve.chi = p.chi();
    curve.jy_bar_family_a = curve.chi * std::sin(curve.theta);
    curve.jx_bar_family_b = -curve.chi * std::cos(curve.theta);
    return curve;
}

EnsembleMoments sde_integrate(const PhasePoint& p0, const SweepConfig& cfg) {
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("sde_integrate: t_end must be positive");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("sde_integrate: dt must be positive");
    if (cfg.n_traj < 1) throw std::invalid_argument("sde_integrate: n_traj must be >= 1");
    if (cfg.gamma < 0.0) throw std::invalid_argument("sde_integrate: gamma must be >= 0");

    const long n_steps = step_count(cfg.t_end, cfg.dt);
    const long stride = std::max<long>(1, n_steps / 400);

    std::vector<long> sample_steps;
    for (long k = 0; k < n_steps; k += stride) sample_steps.push_back(k);
    sample_steps.push_back(n_steps);
    const std::size_t n_samples = sample_steps.size();

    EnsembleMoments out;
    out.n_traj = cfg.n_traj;
    out.t.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const long k = sample_steps[i];
        out.t[i] = (k == n_steps) ? cfg.t_end : k * cfg.dt;
    }
    std::vector<double> mean_x(n_samples, 0.0), m2_x(n_samples, 0.0);
    std::vector<double> mean_y(n_samples, 0.0), m2_y(n_samples, 0.0);

    for (int traj = 0; traj < cfg.n_traj; ++traj) {
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                          static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(traj), 0x9e3779b9u};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> gauss(0.0, 1.0);

        State s = to_state(p0);
        std::size_t next_sample = 0;
        for (long k = 0; k <= n_steps; ++k) {
            if (next_sample < n_samples && sample_steps[next_sample] == k) {
                // Welford update across trajectories, one channel per quadrature.
                const double n = traj + 1;
                const double dx = s[0] - mean_x[next_sample];
                mean_x[next_sample] += dx / n;
                m2_x[next_sample] += dx * (s[0] - mean_x[next_sample]);
                const double dy = s[1] - mean_y[next_sample];
                mean_y[next_sample] += dy / n;
                m2_y[next_sample] += dy * (s[1] - mean_y[next_sample]);
                ++next_sample;
            }
            if (k == n_steps) break;

            const double t_next = (k + 1 == n_steps) ? cfg.t_end : (k + 1) * cfg.dt;
            const double h = t_next - k * cfg.dt;
            State d;
            rhs_into(s, d, cfg.chi);
            const double noise_amp = std::sqrt(cfg.gamma * h);
            const double xi_x = gauss(rng);
            const double xi_y = gauss(rng);
            s[0] += d[0] * h + noise_amp * xi_x;
            s[1] += d[1] * h + noise_amp * xi_y;
            if (!cfg.spin_frozen) {
                s[2] += d[2] * h;
                s[3] += d[3] * h;
                s[4] += d[4] * h;
            }
        }
    }

    out.mean_x = std::move(mean_x);
    out.mean_y = std::move(mean_y);
    out.var_x.resize(n_samples);
    out.var_y.resize(n_samples);
    out.stderr_x.resize(n_samples);
    out.stderr_y.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double var_x = cfg.n_traj > 1 ? m2_x[i] / (cfg.n_traj - 1) : 0.0;
        const double var_y = cfg.n_traj > 1 ? m2_y[i] / (cfg.n_traj - 1) : 0.0;
        out.var_x[i] = var_x;
        out.var_y[i] = var_y;
        out.stderr_x[i] = std::sqrt(var_x / cfg.n_traj);
        out.stderr_y[i] = std::sqrt(var_y / cfg.n_traj);
    }
    return out;
}

}
