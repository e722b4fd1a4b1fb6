#include <cmath>
#include <complex>
#include <stdexcept>

#include <doctest.h>

#include "test_helpers.hpp"
#include "tcsim/spin_algebra.hpp"

using namespace tcsim;
using std::complex;

namespace {
const complex<double> I(0.0, 1.0);

double comm_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                  const Eigen::MatrixXcd& expected) {
    return (a * b - b * a - expected).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_CASE("collective spin matrices satisfy the angular-momentum algebra") {
    for (int n = 1; n <= 10; ++n) {
        const SpinOperators s = build_spin_operators(n);
        CAPTURE(n);
        CHECK(s.dim == n + 1);
        CHECK(s.j == doctest::Approx(0.5 * n));

        CHECK(comm_error(s.jx, s.jy, I * s.jz) <= 1e-12);
        CHECK(comm_error(s.jy, s.jz, I * s.jx) <= 1e-12);
        CHECK(comm_error(s.jz, s.jx, I * s.jy) <= 1e-12);
        CHECK(comm_error(s.jz, s.jp, s.jp) <= 1e-12);
        CHECK(comm_error(s.jz, s.jm, -s.jm) <= 1e-12);
        CHECK(comm_error(s.jp, s.jm, 2.0 * s.jz) <= 1e-12);

        const Eigen::MatrixXcd casimir = s.jx * s.jx + s.jy * s.jy + s.jz * s.jz;
        const Eigen::MatrixXcd expected =
            s.j * (s.j + 1.0) * Eigen::MatrixXcd::Identity(s.dim, s.dim);
        CHECK((casimir - expected).cwiseAbs().maxCoeff() <= 1e-12);

        CHECK((s.jp - s.jm.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((s.jx - s.jx.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK((s.jy - s.jy.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK((s.jz - s.jz.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("lowest Dicke state is annihilated by the lowering operator") {
    for (int n : {1, 3, 8}) {
        const SpinOperators s = build_spin_operators(n);
        Eigen::VectorXcd lowest = Eigen::VectorXcd::Zero(s.dim);
        lowest(0) = 1.0;
        CHECK((s.jm * lowest).norm() == 0.0);
        CHECK(std::real((lowest.adjoint() * s.jz * lowest)(0)) == doctest::Approx(-s.j));
    }
}

TEST_CASE("single-ion matrices reduce to spin one half") {
    const SpinOperators s = build_spin_operators(1);
    CHECK(s.jz(0, 0) == complex<double>(-0.5, 0.0));
    CHECK(s.jz(1, 1) == complex<double>(0.5, 0.0));
    CHECK(s.jz(0, 1) == complex<double>(0.0, 0.0));
    CHECK(s.jp(1, 0) == complex<double>(1.0, 0.0));
    CHECK(s.jp(0, 1) == complex<double>(0.0, 0.0));
}

TEST_CASE("raising matrix element at N=4 between m=0 and m=1") {
    // <j=2, m=1| J+ |j=2, m=0> = sqrt(j(j+1) - m(m+1)) = sqrt(6); m ascends
    // from -j, so m=0 is row/column index 2.
    const SpinOperators s = build_spin_operators(4);
    CHECK(std::abs(s.jp(3, 2) - std::sqrt(6.0)) <= 1e-15);
    CHECK(std::abs(s.jm(2, 3) - std::sqrt(6.0)) <= 1e-15);
}

TEST_CASE("rotation operator at zero angle is the identity") {
    const SpinOperators s = build_spin_operators(5);
    const Eigen::MatrixXcd r = rotation_operator(0.0, s);
    CHECK((r - Eigen::MatrixXcd::Identity(s.dim, s.dim)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("rotation operator is unitary and composes additively") {
    const SpinOperators s = build_spin_operators(4);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(s.dim, s.dim);
    for (double theta : {-1.3, 0.2, 0.7854, 2.9}) {
        CAPTURE(theta);
        const Eigen::MatrixXcd r = rotation_operator(theta, s);
        CHECK((r.adjoint() * r - id).cwiseAbs().maxCoeff() <= 1e-12);
    }
    const Eigen::MatrixXcd a = rotation_operator(0.31, s);
    const Eigen::MatrixXcd b = rotation_operator(0.54, s);
    const Eigen::MatrixXcd ab = rotation_operator(0.85, s);
    CHECK((a * b - ab).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("rotation operator matches a series-expansion exponential") {
    for (int n : {2, 5}) {
        const SpinOperators s = build_spin_operators(n);
        for (double theta : {0.3, 0.7853981633974483}) {
            CAPTURE(n);
            CAPTURE(theta);
            const Eigen::MatrixXcd oracle = test_helpers::matexp(-theta * (s.jp - s.jm));
            const Eigen::MatrixXcd r = rotation_operator(theta, s);
            CHECK((r - oracle).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("rotation conjugates Jz and Jx by a rotation of angle 2 theta") {
    const SpinOperators s = build_spin_operators(6);
    for (int k = 0; k <= 8; ++k) {
        const double theta = -0.9 + 0.35 * k;
        CAPTURE(theta);
        const Eigen::MatrixXcd r = rotation_operator(theta, s);
        const double c = std::cos(2.0 * theta);
        const double sn = std::sin(2.0 * theta);
        const Eigen::MatrixXcd jz_rot = r.adjoint() * s.jz * r;
        const Eigen::MatrixXcd jx_rot = r.adjoint() * s.jx * r;
        CHECK((jz_rot - (c * s.jz - sn * s.jx)).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((jx_rot - (c * s.jx + sn * s.jz)).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("rotated lowest state tilts the spin toward negative Jx") {
    const SpinOperators s = build_spin_operators(4);
    Eigen::VectorXcd lowest = Eigen::VectorXcd::Zero(s.dim);
    lowest(0) = 1.0;
    for (double theta : {0.1, 0.25, 0.5}) {
        CAPTURE(theta);
        const Eigen::VectorXcd psi = rotation_operator(theta, s) * lowest;
        const double mean_jx = std::real((psi.adjoint() * s.jx * psi)(0));
        const double mean_jz = std::real((psi.adjoint() * s.jz * psi)(0));
        CHECK(mean_jx == doctest::Approx(-s.j * std::sin(2.0 * theta)).epsilon(1e-12));
        CHECK(mean_jz == doctest::Approx(-s.j * std::cos(2.0 * theta)).epsilon(1e-12));
    }
}

TEST_CASE("ion count must be positive") {
    CHECK_THROWS_AS(build_spin_operators(0), std::invalid_argument);
    CHECK_THROWS_AS(build_spin_operators(-3), std::invalid_argument);
}
