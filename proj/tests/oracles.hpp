// oracles.hpp — Independent reference computations for the tests. These never
// touch the matrix representations they are used to check.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>

#include "fcs/contour.hpp"
#include "fcs/model.hpp"

namespace fcs::test {

using fcs::cplx;

// ---- single decoupled mode (J = V = 0), exact operator traces -------------

// One fermion mode evolved along the closed two-branch contour: every link is
// a diagonal 2x2 transfer matrix on span{|0>, |1>}, the t=T fold carries the
// twist, the t=0 fold the density-matrix weight and the conjugate twist.
struct SingleMode {
    double zeta_sign;  // zeta * (-1)^(x-1)
    double mu;
    double T;
    int n_t;
    double phi;
    bool in_A;

    double dt() const { return T / n_t; }
    int D() const { return 2 * n_t; }

    Eigen::Matrix2cd link(int p) const {
        const double w = std::exp(-zeta_sign * dt());
        Eigen::Matrix2cd u = Eigen::Vector2cd(1.0, w).asDiagonal();
        if (p == n_t && in_A) {
            u = u * Eigen::Vector2cd(1.0, std::exp(fcs::I * phi)).asDiagonal().toDenseMatrix();
        }
        if (p == 0) {
            cplx w0 = std::exp(-mu);
            if (in_A) w0 *= std::exp(-fcs::I * phi);
            u = u * Eigen::Vector2cd(1.0, w0).asDiagonal().toDenseMatrix();
        }
        return u;
    }

    // trace of the loop with optional operator insertions at points
    // (slot p = between link p and link p+1); insertions given as
    // (point, matrix) sorted arbitrarily; at most 2.
    cplx trace(const std::vector<std::pair<int, Eigen::Matrix2cd>>& ins = {}) const {
        // product order: tr[ L_0 L_{D-1} ... L_1 ], insertion at point p goes
        // immediately left of L_p's right neighbor, i.e. between L_{p+1} and L_p;
        // point 0 sits at the trace seam (far right).
        Eigen::Matrix2cd acc = Eigen::Matrix2cd::Identity();
        auto insert_at = [&](int point) {
            for (const auto& [p, m] : ins) {
                if (p == point) acc = m * acc;
            }
        };
        insert_at(0);
        for (int p = 1; p < D(); ++p) {
            acc = link(p) * acc;
            insert_at(p);
        }
        acc = link(0) * acc;
        return acc.trace();
    }

    cplx partition() const { return trace(); }

    // Contour-ordered two-point function <psi_p psibar_q> with the fermionic
    // ordering sign; equal points give the anti-normal <c cbar>.
    cplx green(int p, int q) const {
        static const Eigen::Matrix2cd c = (Eigen::Matrix2cd() << 0, 1, 0, 0).finished();
        static const Eigen::Matrix2cd cbar = (Eigen::Matrix2cd() << 0, 0, 1, 0).finished();
        if (p == q) {
            return trace({{p, c * cbar}}) / partition();
        }
        if (p > q) {
            return trace({{p, c}, {q, cbar}}) / partition();
        }
        return -trace({{p, c}, {q, cbar}}) / partition();
    }
};

// ---- adaptive quadrature over the real line via tan substitution ----------

// integral of f over (-inf, inf), f decaying at least like 1/w^2 (or odd part
// dropped by the symmetric rule); refinement doubles panels until converged.
inline cplx integrate_line(const std::function<cplx(double)>& f, double scale, double tol,
                           int max_doublings = 18) {
    auto g = [&](double u) {
        const double w = scale * std::tan(u);
        const double jac = scale / std::pow(std::cos(u), 2);
        return f(w) * jac;
    };
    const double a = -M_PI / 2 + 1e-9, b = M_PI / 2 - 1e-9;
    int n = 64;
    auto simpson = [&](int panels) {
        const double h = (b - a) / panels;
        cplx s = g(a) + g(b);
        for (int i = 1; i < panels; ++i) s += g(a + i * h) * (i % 2 ? 4.0 : 2.0);
        return s * (h / 3.0);
    };
    cplx prev = simpson(n);
    for (int d = 0; d < max_doublings; ++d) {
        n *= 2;
        const cplx cur = simpson(n);
        if (std::abs(cur - prev) < tol) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace fcs::test
