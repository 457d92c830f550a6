// action.hpp — On-shell G-Sigma action and the full counting statistics
// F(phi, Q_A)/N it produces, with continuation in the twist angle.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fcs/solver.hpp"

namespace fcs {

// log|det M| + i arg accumulated from a pivoted factorization. The imaginary
// part is a deterministic representative, not reduced mod 2pi.
cplx logdet(const Eigen::MatrixXcd& m);
// Continuity convention: shift by 2 pi k to land nearest to `previous`.
cplx logdet(const Eigen::MatrixXcd& m, cplx previous);
cplx unwind_imag(cplx value, cplx previous);

// -I/N summed over sites for a converged (G, Sigma) pair. Per-site log-dets
// can be carried across continuation steps for branch tracking.
cplx on_shell_action(const ContourGreens& G, const std::vector<SelfEnergy>& Sigma,
                     const ModelParams& params, const ContourGrid& grid, const TwistSpec& twist,
                     const std::vector<cplx>* prev_site_logdets = nullptr,
                     std::vector<cplx>* site_logdets_out = nullptr);

enum class BranchTag { FromBelow, FromAbove };

struct FcsResult {
    double phi = 0.0;
    int A_size = 0;
    cplx f_per_N{0.0, 0.0};
    BranchTag branch = BranchTag::FromBelow;
    bool primary = true;   // min-Re(f) across branches at this (phi, A)
    bool converged = false;
    SolveMeta meta;
    std::string error;
};

struct Baseline {
    cplx minus_I0{0.0, 0.0};
    std::vector<cplx> site_logdets;
    std::vector<SelfEnergy> sigma0;
    SolveMeta meta;
};

Baseline compute_baseline(const ModelParams& params, const ContourGrid& grid,
                          const SolveOptions& opts);

FcsResult fcs_point(const ModelParams& params, const TwistSpec& twist, const ContourGrid& grid,
                    const SolveOptions& opts);
FcsResult fcs_point(const ModelParams& params, const TwistSpec& twist, const ContourGrid& grid,
                    const SolveOptions& opts, const Baseline& baseline);

// Warm-start hook: lets the CLI persist converged self-energies keyed by the
// solve point (see io.hpp for the file-backed implementation).
struct SigmaCache {
    virtual ~SigmaCache() = default;
    virtual bool load(const ModelParams& params, const ContourGrid& grid, const TwistSpec& twist,
                      std::vector<SelfEnergy>& out) = 0;
    virtual void store(const ModelParams& params, const ContourGrid& grid, const TwistSpec& twist,
                       const std::vector<SelfEnergy>& sigma) = 0;
};

struct SweepOptions {
    double continuation_step = 0.05 * M_PI;   // max twist-angle step along a chain
    double both_branches_from = 0.8 * M_PI;   // |phi| beyond which both branches are solved
    int threads = 1;                          // chains run concurrently
};

// Results for the phi x A grid. phi values must lie in (-pi, pi]; near +-pi
// both continuation branches are returned, tagged FromBelow / FromAbove, and
// the min-Re(f) one is marked primary.
std::vector<FcsResult> fcs_sweep(const ModelParams& params, const std::vector<double>& phis,
                                 const std::vector<int>& A_sizes, const ContourGrid& grid,
                                 const SolveOptions& opts, const SweepOptions& sweep_opts = {},
                                 SigmaCache* cache = nullptr);

}  // namespace fcs
