#include "tcsim/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>

#include "tcsim/diagnostics.hpp"
#include "tcsim/errors.hpp"
#include "tcsim/fock_space.hpp"
#include "tcsim/spin_algebra.hpp"

namespace tcsim {

namespace {

using Complex = std::complex<double>;
using SpMat = Eigen::SparseMatrix<Complex>;

SpMat embed_sparse(const Eigen::MatrixXcd& spin_op, const Eigen::MatrixXcd& boson_op,
                   const ProductSpace& space) {
    std::vector<Eigen::Triplet<Complex>> trips;
    for (int sr = 0; sr < space.spin_dim; ++sr) {
        for (int sc = 0; sc < space.spin_dim; ++sc) {
            const Complex sv = spin_op(sr, sc);
            if (sv == Complex(0.0, 0.0)) continue;
            for (int br = 0; br < space.fock_dim; ++br) {
                for (int bc = 0; bc < space.fock_dim; ++bc) {
                    const Complex bv = boson_op(br, bc);
                    if (bv == Complex(0.0, 0.0)) continue;
                    trips.emplace_back(space.index(sr, br), space.index(sc, bc), sv * bv);
                }
            }
        }
    }
    SpMat out(space.total_dim(), space.total_dim());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

Complex sparse_trace_product(const SpMat& op, const Eigen::MatrixXcd& w) {
    // tr(op W) = sum_{ik} op(i,k) W(k,i), touching stored entries only
    Complex acc(0.0, 0.0);
    for (int col = 0; col < op.outerSize(); ++col) {
        for (SpMat::InnerIterator it(op, col); it; ++it) {
            acc += it.value() * w(it.col(), it.row());
        }
    }
    return acc;
}

// Right-hand side of the master equation with precomputed embedded operators.
struct MasterWorkspace {
    SpMat h;
    SpMat a;
    SpMat adag;
    Eigen::VectorXcd m_diag;  // diagonal of a^dag a + a a^dag on the product space
    double gamma = 0.0;
    Eigen::MatrixXcd t1, t2;

    void rhs(const Eigen::MatrixXcd& w, Eigen::MatrixXcd& out) {
        t1.noalias() = h * w;
        t2.noalias() = w * h;
        out = Complex(0.0, -1.0) * (t1 - t2);
        if (gamma > 0.0) {
            t1.noalias() = a * w;
            t2.noalias() = t1 * adag;
            out += gamma * t2;
            t1.noalias() = adag * w;
            t2.noalias() = t1 * a;
            out += gamma * t2;
            out -= (0.5 * gamma) * (m_diag.asDiagonal() * w);
            out -= (0.5 * gamma) * (w * m_diag.asDiagonal());
        }
    }
};

}  // namespace

double DensityOp::trace_real() const { return matrix.trace().real(); }

double DensityOp::hermiticity_error() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOp::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

DensityOp DensityOp::pure(const Eigen::VectorXcd& psi, const ProductSpace& space) {
    if (psi.size() != space.total_dim()) {
        throw std::invalid_argument("DensityOp::pure: state dimension does not match space");
    }
    const double n2 = psi.squaredNorm();
    if (!(n2 > 0.0)) {
        throw std::invalid_argument("DensityOp::pure: state has zero norm");
    }
    DensityOp w;
    w.space = space;
    w.matrix = (psi * psi.adjoint()) / n2;
    return w;
}

void HeatingParams::validate() const {
    if (!(coupling >= 0.0) || !std::isfinite(coupling)) {
        throw std::invalid_argument("HeatingParams: coupling must be finite and >= 0");
    }
    if (!(drive >= 0.0) || !std::isfinite(drive)) {
        throw std::invalid_argument("HeatingParams: drive must be finite and >= 0");
    }
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("HeatingParams: gamma must be finite and >= 0");
    }
}

Eigen::MatrixXcd dissipator(const Eigen::MatrixXcd& a_op, const Eigen::MatrixXcd& w) {
    if (a_op.rows() != a_op.cols() || a_op.rows() != w.rows() || w.rows() != w.cols()) {
        throw std::invalid_argument("dissipator: operator and state dimensions disagree");
    }
    const Eigen::MatrixXcd ada = a_op.adjoint() * a_op;
    return 2.0 * a_op * w * a_op.adjoint() - ada * w - w * ada;
}

Eigen::MatrixXcd master_rhs(const DensityOp& w, const HeatingParams& params) {
    params.validate();
    const ProductSpace& space = w.space;
    if (space.spin_dim < 2 || space.fock_dim < 2) {
        throw std::invalid_argument("master_rhs: product space is degenerate");
    }
    if (w.matrix.rows() != space.total_dim() || w.matrix.cols() != space.total_dim()) {
        throw std::invalid_argument("master_rhs: state dimension does not match space");
    }
    const SpinOperators spin = build_spin_operators(space.spin_dim - 1);
    const BosonOperators boson = build_boson_operators(space.fock_dim - 1);
    const Eigen::MatrixXcd eye_s = Eigen::MatrixXcd::Identity(space.spin_dim, space.spin_dim);

    Eigen::MatrixXcd h =
        params.coupling * (kron(spin.jp, boson.a) + kron(spin.jm, boson.adag));
    h += params.drive * kron(eye_s, boson.a + boson.adag);
    const Eigen::MatrixXcd a_emb = kron(eye_s, boson.a);

    Eigen::MatrixXcd out = Complex(0.0, -1.0) * (h * w.matrix - w.matrix * h);
    if (params.gamma > 0.0) {
        out += 0.5 * params.gamma * dissipator(a_emb, w.matrix);
        out += 0.5 * params.gamma * dissipator(a_emb.adjoint(), w.matrix);
    }
    return out;
}

double default_master_dt(const HeatingParams& params) {
    const double rate = std::max({params.coupling, params.drive, params.gamma});
    if (rate <= 0.0) return 1e-3;
    return 1e-3 / rate;
}

MasterTrajectory evolve_master(const DensityOp& w0, const HeatingParams& params,
                               const MasterOptions& options) {
    params.validate();
    const ProductSpace& space = w0.space;
    if (space.spin_dim < 2 || space.fock_dim < 2) {
        throw std::invalid_argument("evolve_master: product space is degenerate");
    }
    if (w0.matrix.rows() != space.total_dim() || w0.matrix.cols() != space.total_dim()) {
        throw std::invalid_argument("evolve_master: state dimension does not match space");
    }
    if (w0.hermiticity_error() > 1e-8) {
        throw std::invalid_argument("evolve_master: initial state is not Hermitian");
    }
    if (std::abs(w0.trace_real() - 1.0) > 1e-6) {
        throw std::invalid_argument("evolve_master: initial state is not normalized");
    }
    if (!(options.t_end > 0.0)) {
        throw std::invalid_argument("evolve_master: t_end must be positive");
    }
    const double dt = options.dt > 0.0 ? options.dt : default_master_dt(params);

    const int n_max = space.fock_dim - 1;
    const SpinOperators spin = build_spin_operators(space.spin_dim - 1);
    const BosonOperators boson = build_boson_operators(n_max);
    const Eigen::MatrixXcd eye_s = Eigen::MatrixXcd::Identity(space.spin_dim, space.spin_dim);
    const Eigen::MatrixXcd eye_b = Eigen::MatrixXcd::Identity(space.fock_dim, space.fock_dim);

    const Eigen::VectorXd n_diag = kron(eye_s, boson.n).diagonal().real();
    const Eigen::VectorXd jz_diag = kron(spin.jz, eye_b).diagonal().real();

    const double n0 = (n_diag.array() * w0.matrix.diagonal().real().array()).sum();
    const double n_reached = n0 + params.gamma * options.t_end;
    if (n_reached > 0.25 * n_max) {
        const int needed = static_cast<int>(std::ceil(4.0 * n_reached));
        std::ostringstream msg;
        msg << "evolve_master: expected phonon number " << n_reached
            << " needs n_max >= " << needed << " (have " << n_max << ")";
        throw TruncationError(needed, msg.str());
    }

    MasterWorkspace ws;
    ws.h = embed_sparse(params.coupling * spin.jp, boson.a, space) +
           embed_sparse(params.coupling * spin.jm, boson.adag, space) +
           embed_sparse(params.drive * eye_s, boson.a + boson.adag, space);
    ws.a = embed_sparse(eye_s, boson.a, space);
    ws.adag = embed_sparse(eye_s, boson.adag, space);
    ws.m_diag = (boson.adag * boson.a + boson.a * boson.adag)
                    .diagonal()
                    .replicate(space.spin_dim, 1);
    ws.gamma = params.gamma;
    const int dim = space.total_dim();
    ws.t1.resize(dim, dim);
    ws.t2.resize(dim, dim);

    const long n_steps = static_cast<long>(std::ceil(options.t_end / dt - 1e-9));
    const long stride = options.sample_stride > 0
                            ? options.sample_stride
                            : std::max<long>(1, n_steps / 400);

    MasterTrajectory traj;
    Eigen::MatrixXcd w = w0.matrix;
    Eigen::MatrixXcd k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), stage(dim, dim);
    bool positivity_warned = false;

    auto record = [&](double t) {
        traj.t.push_back(t);
        traj.n_mean.push_back((n_diag.array() * w.diagonal().real().array()).sum());
        traj.a_mean.push_back(sparse_trace_product(ws.a, w));
        traj.jz_mean.push_back((jz_diag.array() * w.diagonal().real().array()).sum());
        traj.trace.push_back(w.trace().real());
        traj.purity.push_back(w.squaredNorm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w, Eigen::EigenvaluesOnly);
        const double min_eig = es.eigenvalues().minCoeff();
        traj.min_eig.push_back(min_eig);
        if (min_eig < -1e-8 && !positivity_warned) {
            positivity_warned = true;
            std::ostringstream msg;
            msg << "evolve_master: density operator eigenvalue " << min_eig << " at t = " << t
                << "; raise n_max or reduce dt";
            emit_warning(msg.str());
        }
    };

    record(0.0);
    for (long k = 0; k < n_steps; ++k) {
        const double t0 = k * dt;
        const double t1 = (k + 1 == n_steps) ? options.t_end : (k + 1) * dt;
        const double h = t1 - t0;

        ws.rhs(w, k1);
        stage = w + (0.5 * h) * k1;
        ws.rhs(stage, k2);
        stage = w + (0.5 * h) * k2;
        ws.rhs(stage, k3);
        stage = w + h * k3;
        ws.rhs(stage, k4);
        w += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double tr = w.trace().real();
        if (!(std::abs(tr - 1.0) <= 1e-6)) {  // negated so NaN also trips
            std::ostringstream msg;
            msg << "evolve_master: trace drifted to " << tr << " at t = " << t1
                << "; reduce dt";
            throw AccuracyError(msg.str());
        }
        if ((k + 1) % stride == 0 || k + 1 == n_steps) record(t1);
    }

    traj.final_state = DensityOp{std::move(w), space};
    return traj;
}

}
