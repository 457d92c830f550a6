// saddle.hpp — Phase classification and the closed-form translation-invariant
// saddle of the chain: the triple (P, S, z), the frequency-space propagator it
// parametrizes, and equal-time limits.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fcs/model.hpp"

namespace fcs {

struct SaddleParams {
    double P = 0.0;  // staggered diagonal parameter (energy)
    double S = 0.0;  // inter-branch pairing amplitude, >= 0
    double z = 1.0;  // e^{mu/2}
};

enum class PhaseKind { AreaLaw, Critical, VolumeLaw };
enum class TransitionOrder { Continuous, FirstOrder, NotAtBoundary };

struct PhaseLabel {
    PhaseKind kind;
    TransitionOrder transition_order;
};

struct SaddleDiagnostics {
    std::vector<double> roots;   // all bracketed roots of the S-equation, ascending
    double residual = 0.0;       // |1 - RHS| at the returned root
    int bisection_iters = 0;
    int newton_iters = 0;
};

PhaseLabel classify_phase(const ModelParams& params);

// Residual 1 - [ J/(2 sqrt(P^2+S^2)) + (V/8) S^2/(P^2+S^2)^{3/2} ] at P = zeta/2.
double saddle_residual(double S, const ModelParams& params);

SaddleParams solve_saddle(const ModelParams& params, SaddleDiagnostics* diag = nullptr);

// All roots of the ordered-branch S-equation (P = zeta/2) on [0, J/2 + V/8],
// ascending. Also usable at zeta >= J, where V > 2J keeps a metastable
// ordered branch alive in the coexistence window.
std::vector<double> ordered_branch_roots(const ModelParams& params, SaddleDiagnostics* diag = nullptr);

// Inverse of [[-i w + s P, -S/z], [z S, i w + s P]], s = (-1)^(x-1).
// Throws NumericalError when w^2 + P^2 + S^2 = 0.
Eigen::Matrix2cd greens_frequency(const SaddleParams& saddle, Parity parity, double omega);

enum class EqualTimeSide { Plus, Minus };  // t -> t'^+ vs t'^- ordering, Appendix-C convention

// Residue-integrated equal-time propagator. Side Plus means the first time
// argument is infinitesimally later (t - t' = 0+).
Eigen::Matrix2cd greens_equal_time(const SaddleParams& saddle, Parity parity, EqualTimeSide side);

}  // namespace fcs
