// contour.hpp — Discretized two-branch contour: a single closed loop of
// 2 n_t points with the thermofield-double and twist boundary conditions
// carried by two special links.
//
// Loop index layout (fixed):
//   p in [0, n_t)      u branch, time (p + 1/2) dt, ascending
//   p in [n_t, 2 n_t)  d branch, time T - (p - n_t + 1/2) dt, descending
// so the loop successor of p is (p+1) mod D and every u point shares its time
// with exactly one d point (partner of u slice s is loop point 2 n_t - 1 - s).
// The link into p = n_t crosses the t = T fold (twist phase), the link into
// p = 0 crosses the t = 0 fold (trace antiperiodicity, density-matrix weight,
// conjugate twist phase).
#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "fcs/banded.hpp"
#include "fcs/model.hpp"

namespace fcs {

struct ContourGrid {
    int n_t = 0;
    double dt = 0.0;
    double T = 0.0;

    int points() const { return 2 * n_t; }

    static constexpr cplx f_u{0.0, 1.0};   // branch sign f^u = +i
    static constexpr cplx f_d{0.0, -1.0};  // branch sign f^d = -i

    int u_point(int s) const { return s; }
    int d_point(int s) const { return 2 * n_t - 1 - s; }  // same time as u_point(s)
    bool is_u(int p) const { return p < n_t; }
    int slice_of(int p) const { return is_u(p) ? p : 2 * n_t - 1 - p; }
    double time_of(int p) const { return (slice_of(p) + 0.5) * dt; }

    // paired (banded) position: u_s -> 2s, d partner -> 2s+1
    int banded_of(int p) const { return is_u(p) ? 2 * p : 2 * (2 * n_t - 1 - p) + 1; }

    // Throws ConfigError naming the offending coupling when dt*max(J,V,zeta) > 0.1.
    void check_resolution(const ModelParams& params) const;
};

ContourGrid build_grid(double T, int n_t);
ContourGrid build_grid(const ModelParams& params, int n_t);

struct TwistSpec {
    double phi = 0.0;  // public range (-pi, pi]; continuation may pass wound angles
    int A_size = 0;    // A = {1, ..., A_size}, contiguous from site 1

    bool in_A(int x) const { return x >= 1 && x <= A_size; }
    void validate(int L) const {
        if (A_size < 0 || A_size > L) throw ConfigError("TwistSpec: |A| must be in [0, L]");
    }
};

// (w_fold_T, w_fold_0): the t=T fold link carries the twist phase e^{i phi} for
// x in A; the t=0 fold carries -e^{-mu} (fermionic trace antiperiodicity times
// the density-matrix weight) and the conjugate twist phase e^{-i phi} for x in A.
std::pair<cplx, cplx> boundary_weights(const TwistSpec& twist, double mu, int x);

struct BareInverseProp {
    int x = 0;
    Eigen::MatrixXcd m;  // D x D, loop-index ordering
};

// Link weight into loop point p (the full transfer factor of that link,
// fold weights included).
std::vector<cplx> link_weights(const ContourGrid& grid, const ModelParams& params,
                               const TwistSpec& twist, int x);

BareInverseProp bare_inverse_propagator(const ContourGrid& grid, const ModelParams& params,
                                        const TwistSpec& twist, int x);

// Same matrix assembled in the paired ordering where it is banded (kl = ku = 2).
BandedMatrix bare_inverse_banded(const ContourGrid& grid, const ModelParams& params,
                                 const TwistSpec& twist, int x);

}  // namespace fcs
