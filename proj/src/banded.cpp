#include "fcs/banded.hpp"

#include <cmath>

namespace fcs {

Eigen::MatrixXcd BandedMatrix::dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_, n_);
    for (int j = 0; j < n_; ++j) {
        const int ilo = std::max(0, j - ku_);
        const int ihi = std::min(n_ - 1, j + kl_);
        for (int i = ilo; i <= ihi; ++i) m(i, j) = ab_(kl_ + ku_ + i - j, j);
    }
    return m;
}

Eigen::VectorXcd BandedMatrix::multiply(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n_);
    for (int j = 0; j < n_; ++j) {
        const int ilo = std::max(0, j - ku_);
        const int ihi = std::min(n_ - 1, j + kl_);
        for (int i = ilo; i <= ihi; ++i) y(i) += ab_(kl_ + ku_ + i - j, j) * x(j);
    }
    return y;
}

BandedLU::BandedLU(const BandedMatrix& a)
    : n_(a.n_), kl_(a.kl_), ku_(a.ku_), lu_(a.ab_), ipiv_(a.n_) {
    // Unblocked gbtrf. U's bandwidth grows to kl+ku from pivoting; the top kl
    // rows of the storage hold the fill.
    const int kv = kl_ + ku_;  // effective upper bandwidth of U
    int nswaps = 0;
    for (int j = 0; j < n_; ++j) {
        // pivot among rows j..j+kl
        const int pmax = std::min(kl_, n_ - 1 - j);
        int p = 0;
        double best = std::abs(lu_(kl_ + ku_ + 0, j));
        for (int i = 1; i <= pmax; ++i) {
            const double v = std::abs(lu_(kl_ + ku_ + i, j));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        ipiv_(j) = j + p;
        const cplx piv = lu_(kl_ + ku_ + p, j);
        if (piv == cplx{0.0, 0.0}) {
            singular_ = true;
            logdet_ = cplx{-std::numeric_limits<double>::infinity(), 0.0};
            return;
        }
        if (p != 0) {
            ++nswaps;
            // swap rows j and j+p across columns j..min(n-1, j+kv)
            const int jhi = std::min(n_ - 1, j + kv);
            for (int c = j; c <= jhi; ++c) {
                std::swap(lu_(kl_ + ku_ + j - c, c), lu_(kl_ + ku_ + (j + p) - c, c));
            }
        }
        logdet_ += std::log(lu_(kl_ + ku_, j));
        // eliminate
        const int ihi = std::min(kl_, n_ - 1 - j);
        for (int i = 1; i <= ihi; ++i) {
            const cplx m = lu_(kl_ + ku_ + i, j) / lu_(kl_ + ku_, j);
            lu_(kl_ + ku_ + i, j) = m;  // store multiplier
            const int chi = std::min(n_ - 1, j + kv);
            for (int c = j + 1; c <= chi; ++c) {
                lu_(kl_ + ku_ + (j + i) - c, c) -= m * lu_(kl_ + ku_ + j - c, c);
            }
        }
    }
    if (nswaps % 2 == 1) logdet_ += cplx{0.0, M_PI};
}

void BandedLU::solve_in_place(Eigen::MatrixXcd& b) const {
    if (singular_) throw NumericalError("BandedLU: singular matrix");
    const int kv = kl_ + ku_;
    // work on the transpose so the row operations touch contiguous memory
    Eigen::MatrixXcd bt = b.transpose();
    // forward: apply row interchanges and L
    for (int j = 0; j < n_; ++j) {
        if (ipiv_(j) != j) bt.col(j).swap(bt.col(ipiv_(j)));
        const int ihi = std::min(kl_, n_ - 1 - j);
        for (int i = 1; i <= ihi; ++i) {
            const cplx m = lu_(kl_ + ku_ + i, j);
            if (m != cplx{0.0, 0.0}) bt.col(j + i) -= m * bt.col(j);
        }
    }
    // backward: U x = y
    for (int j = n_ - 1; j >= 0; --j) {
        bt.col(j) /= lu_(kl_ + ku_, j);
        const int ilo = std::max(0, j - kv);
        for (int i = ilo; i < j; ++i) {
            const cplx u = lu_(kl_ + ku_ + i - j, j);
            if (u != cplx{0.0, 0.0}) bt.col(i) -= u * bt.col(j);
        }
    }
    b = bt.transpose();
}

Eigen::MatrixXcd BandedLU::solve(const Eigen::MatrixXcd& b) const {
    Eigen::MatrixXcd x = b;
    solve_in_place(x);
    return x;
}

Eigen::MatrixXcd BandedLU::inverse() const {
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Identity(n_, n_);
    solve_in_place(x);
    return x;
}

}  // namespace fcs
