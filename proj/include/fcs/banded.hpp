// banded.hpp — Complex banded LU with partial pivoting (LAPACK-style band
// storage). The contour inverse propagators are banded in the time-slice
// pairing order, which makes factorization and all-column solves O(n·b^2)
// instead of O(n^3).
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "fcs/model.hpp"

namespace fcs {

class BandedMatrix {
public:
    BandedMatrix(int n, int kl, int ku)
        : n_(n), kl_(kl), ku_(ku), ab_(Eigen::MatrixXcd::Zero(2 * kl + ku + 1, n)) {}

    int size() const { return n_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    bool in_band(int i, int j) const {
        return i >= 0 && j >= 0 && i < n_ && j < n_ && i - j <= kl_ && j - i <= ku_;
    }

    cplx& at(int i, int j) {
        eigen_assert(in_band(i, j));
        return ab_(kl_ + ku_ + i - j, j);
    }
    cplx at(int i, int j) const {
        if (!in_band(i, j)) return cplx{0.0, 0.0};
        return ab_(kl_ + ku_ + i - j, j);
    }
    void add(int i, int j, cplx v) { at(i, j) += v; }
    void set_zero() { ab_.setZero(); }

    Eigen::MatrixXcd dense() const;

    // y = A x for residual checks.
    Eigen::VectorXcd multiply(const Eigen::VectorXcd& x) const;

private:
    friend class BandedLU;
    int n_, kl_, ku_;
    Eigen::MatrixXcd ab_;  // entry (i,j) lives at ab_(kl+ku+i-j, j); top kl rows are pivot fill
};

class BandedLU {
public:
    explicit BandedLU(const BandedMatrix& a);

    bool singular() const { return singular_; }

    // log|det| + i arg accumulated from the pivots (Im not reduced mod 2pi).
    cplx logdet() const { return logdet_; }

    void solve_in_place(Eigen::MatrixXcd& b) const;
    Eigen::MatrixXcd solve(const Eigen::MatrixXcd& b) const;
    Eigen::MatrixXcd inverse() const;

private:
    int n_, kl_, ku_;
    Eigen::MatrixXcd lu_;
    Eigen::VectorXi ipiv_;
    cplx logdet_{0.0, 0.0};
    bool singular_ = false;
};

}  // namespace fcs
