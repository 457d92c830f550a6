// solver.hpp — Damped fixed-point iteration of the discretized
// Schwinger–Dyson equations with twist boundary conditions.
//
// The self-energy is time-local. Same-branch channels keep two placement
// tracks each (slice diagonal and link), the variational split that makes the
// on-shell action exactly stationary at the fixed point and keeps the
// equal-time extractors centered; the physical track sigma^{aa}(t) is their
// sum. Cross-branch channels are single equal-time entries.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "fcs/contour.hpp"
#include "fcs/model.hpp"
#include "fcs/saddle.hpp"

namespace fcs {

enum class Branch { u, d };

// Per-site dense contour Green's functions in the loop index layout.
struct ContourGreens {
    ContourGrid grid;
    std::vector<Eigen::MatrixXcd> site;  // 1-based site x -> site[x-1], D x D

    const Eigen::MatrixXcd& at(int x) const { return site.at(x - 1); }
    Eigen::MatrixXcd& at(int x) { return site.at(x - 1); }

    int loop_index(Branch a, int s) const {
        return a == Branch::u ? grid.u_point(s) : grid.d_point(s);
    }
    // G_x^{ab}(t_i, t_j), slice indices i, j in [0, n_t).
    cplx ab(int x, Branch a, Branch b, int i, int j) const {
        return at(x)(loop_index(a, i), loop_index(b, j));
    }
};

// Equal-time data extracted from a site's Green's function: the two one-sided
// same-branch values per branch and the cross-branch entries, per slice.
struct EqualTimeTracks {
    Eigen::ArrayXcd au, bu;  // u-branch: slice diagonal / weighted link entry
    Eigen::ArrayXcd ad, bd;  // d-branch
    Eigen::ArrayXcd ud, du;  // cross entries G[u_s, d_s], G[d_s, u_s]

    void resize(int n_t) {
        for (auto* a : {&au, &bu, &ad, &bd, &ud, &du}) a->setZero(n_t);
    }
};

struct SelfEnergy {
    // Placement tracks per slice; physical channels are uu = uu_a + uu_b,
    // dd = dd_a + dd_b, ud, du.
    Eigen::ArrayXcd uu_a, uu_b, dd_a, dd_b, ud, du;

    void resize(int n_t) {
        for (auto* a : {&uu_a, &uu_b, &dd_a, &dd_b, &ud, &du}) a->setZero(n_t);
    }
    cplx sigma_uu(int s) const { return uu_a(s) + uu_b(s); }
    cplx sigma_dd(int s) const { return dd_a(s) + dd_b(s); }
    cplx sigma_ud(int s) const { return ud(s); }
    cplx sigma_du(int s) const { return du(s); }
};

enum class InitKind { AnalyticSaddle, Continuation, Zero };

struct SolveOptions {
    double damping = 0.5;
    double tol = 1e-8;
    int max_iters = 2000;
    InitKind init = InitKind::AnalyticSaddle;

    void validate() const {
        if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("SolveOptions: damping must be in (0,1]");
        if (!(tol > 0.0)) throw ConfigError("SolveOptions: tol must be > 0");
        if (max_iters < 1) throw ConfigError("SolveOptions: max_iters must be >= 1");
    }
};

struct SolveMeta {
    int iterations = 0;
    double final_delta = 0.0;
    double wall_seconds = 0.0;
    bool converged = false;
    std::vector<double> delta_tail;  // last few per-iteration deltas
};

struct SolveResult {
    ContourGreens G;
    std::vector<SelfEnergy> Sigma;  // per site
    SolveMeta meta;
};

EqualTimeTracks extract_tracks(const ContourGrid& grid, const ModelParams& params,
                               const Eigen::MatrixXcd& g_loop, int x);

// Self-energy of site x from the equal-time data of x and its neighbors
// (open-chain convention: missing neighbor contributes zero; params.periodic wraps).
SelfEnergy self_energy_from_tracks(const std::vector<EqualTimeTracks>& tracks,
                                   const ModelParams& params, const ContourGrid& grid, int x);

// Spec surface: self-energy of site x from full Green's functions.
SelfEnergy self_energy(const ContourGreens& G, const ModelParams& params, int x);

// Assemble M = D0 - Sigma_hat in the banded (paired) ordering.
BandedMatrix dyson_matrix_banded(const ContourGrid& grid, const ModelParams& params,
                                 const TwistSpec& twist, const SelfEnergy& sigma, int x);

// Spec surface: G = (D0 - Sigma)^{-1} for one site via pivoted factorization,
// with a residual check ||(D0-Sigma)G - 1||_max < 1e-10.
Eigen::MatrixXcd dyson_invert(const BareInverseProp& d0, const SelfEnergy& sigma,
                              const ContourGrid& grid, const ModelParams& params,
                              const TwistSpec& twist);

SolveResult solve_fixed_point(const ModelParams& params, const TwistSpec& twist,
                              const ContourGrid& grid, const SolveOptions& opts,
                              const std::vector<SelfEnergy>* continuation = nullptr);

// (P, S) extracted from the bulk of a converged phi = 0 solution: S and parity
// products from mid-contour equal-time entries, the decay rate from a
// log-linear fit of the mid-contour tau profile.
struct BulkExtraction {
    double P = 0.0;
    double S = 0.0;
    double decay_rate = 0.0;  // fitted R = sqrt(P^2 + S^2)
};
BulkExtraction extract_bulk_saddle(const ContourGreens& G, const ModelParams& params);

}  // namespace fcs
