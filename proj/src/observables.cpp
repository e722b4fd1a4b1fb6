#include "tcsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "model_internal.hpp"
#include "tcsim/diagnostics.hpp"
#include "tcsim/errors.hpp"
#include "tcsim/fock_space.hpp"
#include "tcsim/spin_algebra.hpp"

namespace tcsim {

namespace {

using Complex = std::complex<double>;
using RowMajorXcd =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMajorXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kPi = 3.14159265358979323846;

void require_normalized(const Eigen::VectorXcd& state, const char* who) {
    if (std::abs(state.norm() - 1.0) > 1e-6) {
        throw std::invalid_argument(std::string(who) + ": state is not normalized");
    }
}

double variance_from_rho(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& x_op,
                         const Eigen::MatrixXcd& y_op, double phi) {
    const Eigen::MatrixXcd q = std::cos(phi) * x_op + std::sin(phi) * y_op;
    const double mean = expectation(q, rho).real();
    const double mean_sq = expectation(q * q, rho).real();
    return mean_sq - mean * mean;
}

struct AnglePick {
    double phi = 0.0;
    double value = 0.0;
};

// Coarse scan of [0, pi) then golden-section refinement of the best bracket.
// The variance is pi-periodic and sinusoidal in 2 phi, so the coarse grid
// always brackets the global minimum.
AnglePick minimize_over_angle(const std::function<double(double)>& f) {
    constexpr int kCoarse = 32;
    double best_phi = 0.0;
    double best_val = f(0.0);
    for (int i = 1; i < kCoarse; ++i) {
        const double phi = kPi * i / kCoarse;
        const double val = f(phi);
        if (val < best_val) {
            best_val = val;
            best_phi = phi;
        }
    }
    const double half_width = kPi / kCoarse;
    double a = best_phi - half_width;
    double b = best_phi + half_width;
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > 1e-10) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    double phi = std::fmod(0.5 * (a + b), kPi);
    if (phi < 0.0) phi += kPi;
    return {phi, f(phi)};
}

double top_level_population(const Eigen::VectorXcd& psi, const ProductSpace& space) {
    double acc = 0.0;
    for (int is = 0; is < space.spin_dim; ++is) {
        acc += std::norm(psi(space.index(is, space.fock_dim - 1)));
    }
    return acc;
}

}  // namespace

std::complex<double> expectation(const Eigen::MatrixXcd& op, const Eigen::VectorXcd& state) {
    if (op.rows() != op.cols() || op.rows() != state.size()) {
        throw std::invalid_argument("expectation: operator and state dimensions disagree");
    }
    return state.dot(op * state);
}

std::complex<double> expectation(const Eigen::MatrixXcd& op, const Eigen::MatrixXcd& rho) {
    if (op.rows() != op.cols() || rho.rows() != rho.cols() || op.rows() != rho.rows()) {
        throw std::invalid_argument("expectation: operator and density dimensions disagree");
    }
    return op.cwiseProduct(rho.transpose()).sum();
}

double quadrature_variance(const Eigen::VectorXcd& state, const Eigen::MatrixXcd& x_op,
                           const Eigen::MatrixXcd& y_op, double phi) {
    if (x_op.rows() != x_op.cols() || y_op.rows() != y_op.cols() ||
        x_op.rows() != state.size() || y_op.rows() != state.size()) {
        throw std::invalid_argument(
            "quadrature_variance: operator and state dimensions disagree");
    }
    require_normalized(state, "quadrature_variance");
    const Eigen::VectorXcd q_psi =
        std::cos(phi) * (x_op * state) + std::sin(phi) * (y_op * state);
    const double mean_sq = q_psi.squaredNorm();  // quadratures are Hermitian
    const double mean = state.dot(q_psi).real();
    return mean_sq - mean * mean;
}

MinQuadrature min_quadrature_variance(const Eigen::VectorXcd& state,
                                      const Eigen::MatrixXcd& x_op,
                                      const Eigen::MatrixXcd& y_op) {
    const AnglePick pick = minimize_over_angle(
        [&](double phi) { return quadrature_variance(state, x_op, y_op, phi); });
    return {pick.phi, pick.value};
}

ScanResult scan_phase_transition(int n_ions, double coupling,
                                 const std::vector<double>& x_grid, int n_max,
                                 double track_step) {
    if (n_ions < 1) throw std::invalid_argument("scan: n_ions must be >= 1");
    if (!(coupling > 0.0)) throw std::invalid_argument("scan: coupling must be positive");
    if (n_max < 1) throw std::invalid_argument("scan: n_max must be >= 1");
    if (x_grid.empty()) throw std::invalid_argument("scan: x_grid is empty");
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        if (!(x_grid[i] >= 0.0) || !std::isfinite(x_grid[i])) {
            throw std::invalid_argument("scan: x_grid values must be finite and >= 0");
        }
        if (i > 0 && !(x_grid[i] > x_grid[i - 1])) {
            throw std::invalid_argument("scan: x_grid must be strictly ascending");
        }
    }
    if (!(x_grid.front() < 1.0)) {
        throw std::invalid_argument("scan: grid must start below threshold (x < 1)");
    }
    if (!(track_step > 0.0) || track_step > 0.05 + 1e-12) {
        throw std::invalid_argument("scan: track_step must lie in (0, 0.05]");
    }

    const SpinOperators spin = build_spin_operators(n_ions);
    const BosonOperators boson = build_boson_operators(n_max);
    const ProductSpace space{spin.dim, boson.dim};
    const double j = 0.5 * n_ions;
    const double scaled_unit = std::sqrt(2.0) * coupling;

    Eigen::VectorXd psi = Eigen::VectorXd::Zero(space.total_dim());
    psi(0) = 1.0;  // |j,-j> (x) |0>, exact at E = 0
    const Eigen::VectorXd jz_diag = detail::spin_projection_diagonal(space);
    double cur_x = 0.0;
    double cur_eig = 0.0;
    double cur_ovl = 1.0;
    bool failed = false;

    ScanResult out;
    for (const double target : x_grid) {
        if (!failed && target > cur_x + 1e-15) {
            const int n_sub =
                static_cast<int>(std::ceil((target - cur_x) / track_step - 1e-9));
            const double x_from = cur_x;
            for (int i = 1; i <= n_sub; ++i) {
                const double xk =
                    (i == n_sub) ? target : x_from + (target - x_from) * i / n_sub;
                const ModelParams p = ModelParams::from_x(n_ions, coupling, xk);
                const Eigen::MatrixXd h = detail::build_hamiltonian_real(p, n_max);
                const detail::EighReal es = detail::eigh(h);
                const detail::ContinuationStep step =
                    detail::continue_eigenstate(es, jz_diag, psi);
                if (step.overlap < 0.5) {
                    failed = true;
                    out.failure_x = xk;
                    break;
                }
                psi = step.state;
                cur_eig = step.eigenvalue;
                cur_ovl = step.overlap;
                cur_x = xk;
            }
        }

        ScanRow row;
        row.x = target;
        const ScaledMoments an = analytic_scaled_moments(target);
        row.jx_an = an.jx;
        row.jy_an = an.jy;
        row.jz_an = an.jz;

        if (!failed) {
            Eigen::Map<const RowMajorXd> big(psi.data(), space.spin_dim, space.fock_dim);
            const Eigen::MatrixXcd rho_s =
                (big * big.transpose()).cast<Complex>();  // spin marginal
            const Eigen::MatrixXcd rho_b =
                (big.transpose() * big).cast<Complex>();  // mode marginal
            row.jx_num = expectation(spin.jx, rho_s).real() / j;
            row.jy_num = expectation(spin.jy, rho_s).real() / j;
            row.jz_num = expectation(spin.jz, rho_s).real() / j;
            row.var_min = minimize_over_angle([&](double phi) {
                              return variance_from_rho(rho_b, boson.x, boson.y, phi);
                          }).value;
            row.eigenvalue = cur_eig;
            row.overlap = cur_ovl;

            if (target < 1.0) {
                const ModelParams p = ModelParams::from_x(n_ions, coupling, target);
                const AnsatzSolution sol = solve_ansatz(p);
                const Eigen::VectorXcd psi_ans = build_ansatz_state(sol, spin, boson);
                const Eigen::MatrixXd h = detail::build_hamiltonian_real(p, n_max);
                const double res_re = (h * psi_ans.real()).norm();
                const double res_im = (h * psi_ans.imag()).norm();
                row.residual = std::hypot(res_re, res_im) / scaled_unit;
                row.r_ansatz = sol.squeeze.r;
            }
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

AdiabaticResult adiabatic_sweep(int n_ions, double coupling, const RampDescriptor& ramp,
                                double t_end, double dt, int n_max, double sample_dt) {
    if (n_ions < 1) throw std::invalid_argument("adiabatic_sweep: n_ions must be >= 1");
    if (!(coupling > 0.0)) {
        throw std::invalid_argument("adiabatic_sweep: coupling must be positive");
    }
    if (n_max < 1) throw std::invalid_argument("adiabatic_sweep: n_max must be >= 1");
    if (!(t_end > 0.0)) throw std::invalid_argument("adiabatic_sweep: t_end must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("adiabatic_sweep: dt must be positive");
    if (!(ramp.ramp_time > 0.0)) {
        throw std::invalid_argument("adiabatic_sweep: ramp_time must be positive");
    }
    if (!(ramp.x_final >= 0.0)) {
        throw std::invalid_argument("adiabatic_sweep: x_final must be >= 0");
    }

    const ProductSpace space{n_ions + 1, n_max + 1};
    const int dim = space.total_dim();
    const BosonOperators boson = build_boson_operators(n_max);

    const Eigen::MatrixXd h0 =
        detail::build_hamiltonian_real(ModelParams{n_ions, coupling, 0.0}, n_max);
    Eigen::MatrixXd dmat = Eigen::MatrixXd::Zero(dim, dim);  // a + a^dag, embedded
    for (int is = 0; is < space.spin_dim; ++is) {
        for (int n = 1; n <= n_max; ++n) {
            const double amp = std::sqrt(static_cast<double>(n));
            dmat(space.index(is, n - 1), space.index(is, n)) = amp;
            dmat(space.index(is, n), space.index(is, n - 1)) = amp;
        }
    }

    const double e_max = 0.5 * ramp.x_final * n_ions * coupling;
    const double spectral_estimate =
        n_ions * coupling * std::sqrt(static_cast<double>(n_max)) +
        2.0 * e_max * std::sqrt(static_cast<double>(n_max)) + 1.0;
    if (dt * spectral_estimate > 2.8) {
        std::ostringstream msg;
        msg << "adiabatic_sweep: dt = " << dt << " may be unstable against |H| ~ "
            << spectral_estimate << "; reduce dt";
        emit_warning(msg.str());
    }

    const long n_steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
    const long stride = sample_dt > 0.0
                            ? std::max<long>(1, std::lround(sample_dt / dt))
                            : std::max<long>(1, n_steps / 400);

    const auto x_of = [&](double t) {
        return ramp.x_final * std::min(t / ramp.ramp_time, 1.0);
    };
    const auto e_of = [&](double t) { return 0.5 * n_ions * coupling * x_of(t); };

    // psi = u + i v evolves as u' = H v, v' = -H u (H is real symmetric)
    Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    u(0) = 1.0;
    Eigen::VectorXd ref = u;  // instantaneous zero state, continued along the ramp
    const Eigen::VectorXd jz_diag = detail::spin_projection_diagonal(space);

    AdiabaticResult out;
    bool leak_warned = false;
    bool track_warned = false;
    bool norm_warned = false;
    Eigen::MatrixXd h_work(dim, dim);

    const auto sample_at = [&](double t) {
        const double norm = std::sqrt(u.squaredNorm() + v.squaredNorm());
        if (std::abs(norm - 1.0) > 1e-6 && !norm_warned) {
            norm_warned = true;
            std::ostringstream msg;
            msg << "adiabatic_sweep: norm drifted to " << norm << " at t = " << t
                << "; reduce dt";
            out.warnings.push_back(msg.str());
            emit_warning(msg.str());
        }
        u /= norm;
        v /= norm;

        h_work = h0;
        h_work += e_of(t) * dmat;
        const detail::EighReal es = detail::eigh(h_work);
        const detail::ContinuationStep step = detail::continue_eigenstate(es, jz_diag, ref);
        ref = step.state;
        if (step.overlap < 0.5 && !track_warned) {
            track_warned = true;
            std::ostringstream msg;
            msg << "adiabatic_sweep: reference tracking degraded (overlap = "
                << step.overlap << " at t = " << t << ")";
            out.warnings.push_back(msg.str());
            emit_warning(msg.str());
        }

        SweepSample s;
        s.t = t;
        s.x = x_of(t);
        const double c_re = ref.dot(u);
        const double c_im = ref.dot(v);
        s.fidelity = c_re * c_re + c_im * c_im;
        s.energy = u.dot(h_work * u) + v.dot(h_work * v);

        Eigen::VectorXcd psi(dim);
        psi.real() = u;
        psi.imag() = v;
        Eigen::Map<const RowMajorXcd> big(psi.data(), space.spin_dim, space.fock_dim);
        const Eigen::MatrixXcd rho_b = big.adjoint() * big;
        s.var_min = minimize_over_angle([&](double phi) {
                        return variance_from_rho(rho_b, boson.x, boson.y, phi);
                    }).value;
        s.leak = top_level_population(psi, space);
        // Slow ramps spread a cutoff-independent ~1e-5 plateau across the
        // degenerate zero-energy band, so only flag populations well above it.
        if (s.leak > 1e-4 && !leak_warned) {
            leak_warned = true;
            std::ostringstream msg;
            msg << "adiabatic_sweep: top Fock level population " << s.leak
                << " at t = " << t << "; raise n_max";
            out.warnings.push_back(msg.str());
            emit_warning(msg.str());
        }
        out.samples.push_back(s);
    };

    sample_at(0.0);
    Eigen::VectorXd ku1(dim), kv1(dim), ku2(dim), kv2(dim), ku3(dim), kv3(dim),
        ku4(dim), kv4(dim), us(dim), vs(dim);
    for (long k = 0; k < n_steps; ++k) {
        const double t0 = k * dt;
        const double t1 = (k + 1 == n_steps) ? t_end : (k + 1) * dt;
        const double h = t1 - t0;
        h_work = h0;
        h_work += e_of(t0 + 0.5 * h) * dmat;

        ku1.noalias() = h_work * v;
        kv1.noalias() = -(h_work * u);
        us = u + (0.5 * h) * ku1;
        vs = v + (0.5 * h) * kv1;
        ku2.noalias() = h_work * vs;
        kv2.noalias() = -(h_work * us);
        us = u + (0.5 * h) * ku2;
        vs = v + (0.5 * h) * kv2;
        ku3.noalias() = h_work * vs;
        kv3.noalias() = -(h_work * us);
        us = u + h * ku3;
        vs = v + h * kv3;
        ku4.noalias() = h_work * vs;
        kv4.noalias() = -(h_work * us);
        u += (h / 6.0) * (ku1 + 2.0 * ku2 + 2.0 * ku3 + ku4);
        v += (h / 6.0) * (kv1 + 2.0 * kv2 + 2.0 * kv3 + kv4);

        if ((k + 1) % stride == 0 || k + 1 == n_steps) sample_at(t1);
    }

    out.final_state.resize(dim);
    out.final_state.real() = u;
    out.final_state.imag() = v;
    return out;
}

}
