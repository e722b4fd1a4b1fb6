#include "tcsim/model.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "model_internal.hpp"
#include "tcsim/errors.hpp"

namespace tcsim {

using std::complex;

Regime ModelParams::regime() const {
    const double xv = x();
    if (xv < 1.0) return Regime::Below;
    if (xv == 1.0) return Regime::Critical;
    return Regime::Above;
}

ModelParams ModelParams::from_x(int n_ions, double coupling, double x) {
    ModelParams p;
    p.n_ions = n_ions;
    p.coupling = coupling;
    p.drive = 0.5 * x * n_ions * coupling;
    p.validate();
    return p;
}

void ModelParams::validate() const {
    if (n_ions < 1) {
        throw std::invalid_argument("ModelParams: n_ions must be >= 1");
    }
    if (!(coupling > 0.0) || !std::isfinite(coupling)) {
        throw std::invalid_argument("ModelParams: coupling must be positive and finite");
    }
    if (drive < 0.0 || !std::isfinite(drive)) {
        throw std::invalid_argument("ModelParams: drive must be non-negative and finite");
    }
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& spin_op, const Eigen::MatrixXcd& boson_op) {
    Eigen::MatrixXcd out(spin_op.rows() * boson_op.rows(), spin_op.cols() * boson_op.cols());
    for (Eigen::Index i = 0; i < spin_op.rows(); ++i) {
        for (Eigen::Index k = 0; k < spin_op.cols(); ++k) {
            out.block(i * boson_op.rows(), k * boson_op.cols(), boson_op.rows(),
                      boson_op.cols()) = spin_op(i, k) * boson_op;
        }
    }
    return out;
}

namespace detail {

Eigen::MatrixXd build_hamiltonian_real(const ModelParams& p, int n_max) {
    p.validate();
    if (n_max < 1) {
        throw std::invalid_argument("build_hamiltonian_real: n_max must be >= 1");
    }
    const int sd = p.n_ions + 1;
    const int fd = n_max + 1;
    const double j = 0.5 * p.n_ions;

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(sd * fd, sd * fd);
    // Omega (a J+ + a+ J-): J+ connects spin k -> k+1, a connects Fock n -> n-1.
    for (int k = 0; k + 1 < sd; ++k) {
        const double m = -j + k;
        const double jp = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
        for (int n = 1; n < fd; ++n) {
            const double amp = p.coupling * jp * std::sqrt(static_cast<double>(n));
            const int row = (k + 1) * fd + (n - 1);
            const int col = k * fd + n;
            h(row, col) += amp;
            h(col, row) += amp;
        }
    }
    // E (a + a+), identity on the spin factor.
    for (int k = 0; k < sd; ++k) {
        for (int n = 1; n < fd; ++n) {
            const double amp = p.drive * std::sqrt(static_cast<double>(n));
            const int row = k * fd + (n - 1);
            const int col = k * fd + n;
            h(row, col) += amp;
            h(col, row) += amp;
        }
    }
    return h;
}

Eigen::VectorXd spin_projection_diagonal(const ProductSpace& space) {
    const double j = 0.5 * (space.spin_dim - 1);
    Eigen::VectorXd diag(space.total_dim());
    for (int s = 0; s < space.spin_dim; ++s) {
        for (int b = 0; b < space.fock_dim; ++b) diag(space.index(s, b)) = -j + s;
    }
    return diag;
}

ContinuationStep continue_eigenstate(const EighReal& es, const Eigen::VectorXd& jz_diag,
                                     const Eigen::VectorXd& prev) {
    const Eigen::Index dim = es.eigenvalues.size();
    const Eigen::VectorXd overlaps = es.eigenvectors.transpose() * prev;
    Eigen::Index best = 0;
    overlaps.cwiseAbs().maxCoeff(&best);

    const double spectral_radius =
        std::max(std::abs(es.eigenvalues(0)), std::abs(es.eigenvalues(dim - 1)));
    const double cluster_width = 1e-9 * std::max(1.0, spectral_radius);
    Eigen::Index lo = best;
    Eigen::Index hi = best;
    while (lo > 0 && es.eigenvalues(best) - es.eigenvalues(lo - 1) <= cluster_width) --lo;
    while (hi + 1 < dim && es.eigenvalues(hi + 1) - es.eigenvalues(best) <= cluster_width) ++hi;
    const Eigen::Index span = hi - lo + 1;

    ContinuationStep step;
    if (span == 1) {
        const double sign = overlaps(best) < 0.0 ? -1.0 : 1.0;
        step.state = sign * es.eigenvectors.col(best);
        step.eigenvalue = es.eigenvalues(best);
        step.overlap = std::abs(overlaps(best));
        return step;
    }

    const Eigen::MatrixXd basis = es.eigenvectors.middleCols(lo, span);
    const Eigen::MatrixXd compressed = basis.transpose() * jz_diag.asDiagonal() * basis;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sub(compressed);
    const Eigen::MatrixXd canonical = basis * sub.eigenvectors();

    const Eigen::VectorXd member_overlaps = canonical.transpose() * prev;
    Eigen::Index pick = 0;
    member_overlaps.cwiseAbs().maxCoeff(&pick);
    const double sign = member_overlaps(pick) < 0.0 ? -1.0 : 1.0;
    step.state = sign * canonical.col(pick);
    step.overlap = std::abs(member_overlaps(pick));
    double rayleigh = 0.0;  // exact for a vector inside the cluster span
    for (Eigen::Index i = 0; i < span; ++i) {
        const double c = sub.eigenvectors()(i, pick);
        rayleigh += c * c * es.eigenvalues(lo + i);
    }
    step.eigenvalue = rayleigh;
    return step;
}

double top_fock_occupancy(const Eigen::VectorXd& psi, const ProductSpace& space) {
    double occ = 0.0;
    for (int k = 0; k < space.spin_dim; ++k) {
        const double amp = psi(space.index(k, space.fock_dim - 1));
        occ += amp * amp;
    }
    return occ;
}

}  // namespace detail

Eigen::MatrixXcd build_hamiltonian(const ModelParams& p, int n_max) {
    return detail::build_hamiltonian_real(p, n_max).cast<complex<double>>();
}

Eigen::MatrixXcd build_scaled_hamiltonian(const ModelParams& p, int n_max) {
    p.validate();
    const SpinOperators spin = build_spin_operators(p.n_ions);
    const BosonOperators boson = build_boson_operators(n_max);
    const Eigen::MatrixXcd identity_spin = Eigen::MatrixXcd::Identity(spin.dim, spin.dim);
    return kron(spin.jx, boson.x) - kron(spin.jy, boson.y) +
           p.chi() * kron(identity_spin, boson.x);
}

Eigen::VectorXcd ground_product_state(const ProductSpace& space) {
    if (space.spin_dim < 2 || space.fock_dim < 2) {
        throw std::invalid_argument("ground_product_state: degenerate product space");
    }
    // m = -j is spin index 0 and the Fock vacuum is index 0.
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(space.total_dim());
    psi(0) = 1.0;
    return psi;
}

double symmetric_subspace_oracle(const ModelParams& p, int n_max) {
    p.validate();
    if (p.n_ions > 3) {
        throw std::invalid_argument(
            "symmetric_subspace_oracle: only N <= 3 is supported (cost grows as 2^N)");
    }
    if (n_max < 1) {
        throw std::invalid_argument("symmetric_subspace_oracle: n_max must be >= 1");
    }
    const int n = p.n_ions;
    const int full = 1 << n;
    const int fd = n_max + 1;

    // Collective raising operator from single-ion sigma+ (bit k set = ion k excited).
    Eigen::MatrixXcd sp_full = Eigen::MatrixXcd::Zero(full, full);
    for (int state = 0; state < full; ++state) {
        for (int ion = 0; ion < n; ++ion) {
            if (!(state & (1 << ion))) {
                sp_full(state | (1 << ion), state) += 1.0;
            }
        }
    }
    const Eigen::MatrixXcd sm_full = sp_full.adjoint();

    const BosonOperators boson = build_boson_operators(n_max);
    const Eigen::MatrixXcd identity_full = Eigen::MatrixXcd::Identity(full, full);
    const Eigen::MatrixXcd h_full = p.coupling * (kron(sp_full, boson.a) +
                                                  kron(sm_full, boson.adag)) +
                                    p.drive * kron(identity_full, boson.a + boson.adag);

    // Dicke isometry: column k is the normalized symmetric state with k excitations.
    Eigen::MatrixXcd v_spin = Eigen::MatrixXcd::Zero(full, n + 1);
    std::vector<int> count(n + 1, 0);
    for (int state = 0; state < full; ++state) {
        count[__builtin_popcount(static_cast<unsigned>(state))] += 1;
    }
    for (int state = 0; state < full; ++state) {
        const int k = __builtin_popcount(static_cast<unsigned>(state));
        v_spin(state, k) = 1.0 / std::sqrt(static_cast<double>(count[k]));
    }
    const Eigen::MatrixXcd isometry = kron(v_spin, Eigen::MatrixXcd::Identity(fd, fd));

    const Eigen::MatrixXcd compressed = isometry.adjoint() * h_full * isometry;
    const Eigen::MatrixXcd collective = build_hamiltonian(p, n_max);
    return (compressed - collective).cwiseAbs().maxCoeff();
}

std::vector<TrackedState> track_zero_state(const std::vector<ModelParams>& sweep,
                                           int n_max,
                                           const TrackOptions& options) {
    if (sweep.empty()) {
        throw std::invalid_argument("track_zero_state: empty sweep");
    }
    if (n_max < 1) {
        throw std::invalid_argument("track_zero_state: n_max must be >= 1");
    }
    if (sweep.front().drive != 0.0) {
        throw std::invalid_argument("track_zero_state: sweep must start at E = 0");
    }
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        sweep[k].validate();
        if (sweep[k].n_ions != sweep.front().n_ions ||
            sweep[k].coupling != sweep.front().coupling) {
            throw std::invalid_argument(
                "track_zero_state: n_ions and coupling must be constant along the sweep");
        }
        if (k > 0 &&
            std::abs(sweep[k].x() - sweep[k - 1].x()) > options.max_x_step + 1e-12) {
            throw std::invalid_argument("track_zero_state: x step exceeds max_x_step");
        }
    }

    const ProductSpace space{sweep.front().n_ions + 1, n_max + 1};
    std::vector<TrackedState> out;
    out.reserve(sweep.size());

    // At E = 0 the zero state is known exactly; diagonalizing there would hit
    // the degenerate zero eigenspace with no history to project.
    Eigen::VectorXd current = Eigen::VectorXd::Zero(space.total_dim());
    current(0) = 1.0;
    out.push_back({current.cast<complex<double>>(), 0.0, 1.0, 0.0});

    const Eigen::VectorXd jz_diag = detail::spin_projection_diagonal(space);
    for (std::size_t k = 1; k < sweep.size(); ++k) {
        const Eigen::MatrixXd h = detail::build_hamiltonian_real(sweep[k], n_max);
        const detail::EighReal es = detail::eigh(h);
        const detail::ContinuationStep step = detail::continue_eigenstate(es, jz_diag, current);
        if (step.overlap < options.overlap_fail) {
            std::ostringstream msg;
            msg << "track_zero_state: continuation lost at x = " << sweep[k].x()
                << " (best overlap " << step.overlap << " < " << options.overlap_fail << ")";
            throw ContinuationError(sweep[k].x(), step.overlap, msg.str());
        }
        current = step.state;
        out.push_back({current.cast<complex<double>>(), step.eigenvalue, step.overlap,
                       detail::top_fock_occupancy(current, space)});
    }
    return out;
}

}
