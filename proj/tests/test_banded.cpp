#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "fcs/banded.hpp"

using namespace fcs;

namespace {

BandedMatrix random_banded(int n, int kl, int ku, std::mt19937& rng) {
    std::normal_distribution<double> dist;
    BandedMatrix m(n, kl, ku);
    for (int j = 0; j < n; ++j) {
        for (int i = std::max(0, j - ku); i <= std::min(n - 1, j + kl); ++i) {
            m.at(i, j) = cplx{dist(rng), dist(rng)};
        }
    }
    return m;
}

}  // namespace

TEST_CASE("banded LU matches dense LU on random matrices") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 8 + (trial % 5) * 17;
        const int kl = 1 + trial % 3, ku = 1 + (trial / 3) % 3;
        BandedMatrix m = random_banded(n, kl, ku, rng);
        Eigen::MatrixXcd dense = m.dense();
        BandedLU lu(m);
        REQUIRE_FALSE(lu.singular());

        Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Random(n, 3);
        Eigen::MatrixXcd x = lu.solve(rhs);
        CHECK((dense * x - rhs).cwiseAbs().maxCoeff() < 1e-10);

        Eigen::MatrixXcd inv = lu.inverse();
        CHECK((dense * inv - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);

        // logdet agrees with the dense determinant up to 2 pi in the phase
        const cplx ld = lu.logdet();
        const cplx det_dense = Eigen::PartialPivLU<Eigen::MatrixXcd>(dense).determinant();
        CHECK(std::abs(std::exp(ld.real()) - std::abs(det_dense)) / std::abs(det_dense) < 1e-9);
        const cplx ratio = std::exp(ld) / det_dense;
        CHECK(std::abs(ratio - cplx{1.0, 0.0}) < 1e-9);
    }
}

TEST_CASE("banded LU pivots through small leading entries") {
    // leading diagonal entry tiny: without pivoting this would blow up
    BandedMatrix m(4, 2, 2);
    m.at(0, 0) = 1e-300;
    m.at(1, 0) = 1.0;
    m.at(0, 1) = 1.0;
    m.at(1, 1) = 1.0;
    m.at(2, 1) = 0.5;
    m.at(1, 2) = -2.0;
    m.at(2, 2) = 1.0;
    m.at(3, 2) = 0.25;
    m.at(2, 3) = 3.0;
    m.at(3, 3) = 1.0;
    BandedLU lu(m);
    REQUIRE_FALSE(lu.singular());
    Eigen::MatrixXcd inv = lu.inverse();
    CHECK((m.dense() * inv - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("banded LU reports singular matrices") {
    BandedMatrix m(3, 1, 1);
    m.at(0, 0) = 1.0;  // row 1 left zero
    m.at(2, 2) = 1.0;
    BandedLU lu(m);
    CHECK(lu.singular());
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Identity(3, 3);
    CHECK_THROWS_AS(lu.solve_in_place(rhs), NumericalError);
}

TEST_CASE("banded multiply matches dense multiply") {
    std::mt19937 rng(3);
    BandedMatrix m = random_banded(30, 2, 2, rng);
    Eigen::VectorXcd x = Eigen::VectorXcd::Random(30);
    CHECK((m.multiply(x) - m.dense() * x).cwiseAbs().maxCoeff() < 1e-12);
}
