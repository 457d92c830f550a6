// eft.hpp — Quadratic-fluctuation kernels around the two saddles and the
// closed-form FCS predictions they imply. All kernels are transcribed into
// builder functions over one shared symbol set (zeta, S, z, Omega, k, J, V);
// parity enters through the staggered sign.
#pragma once

#include <Eigen/Dense>
#include <array>

#include "fcs/model.hpp"
#include "fcs/saddle.hpp"

namespace fcs {

enum class KernelBasis {
    GudMomentum,   // (dG^{ud}_k, dG^{ud}_{k+pi})
    SigmaTracks,   // (dSigma^{uu}, dSigma^{dd}, dSigma^{ud}, dSigma^{du})
    GreenTracks,   // (dG^{uu}, dG^{dd}, dG^{du}, dG^{ud})
    PhiFields,     // (phi1_k, phi1_{k+pi}, phi2_k, phi2_{k+pi})
};

struct KernelMatrix {
    Eigen::MatrixXcd m;
    KernelBasis basis;
    double Omega = 0.0;
    double k = 0.0;
    int parity_sign = +1;  // (-1)^(x-1)
    bool hermitian = false;
};

// Short-range phase (zeta > J), quadratic action kernel in the
// (dG^{ud}_k, dG^{ud}_{k+pi}) basis after the small-k expansion.
KernelMatrix kernel_short_range(double Omega, double k, const ModelParams& params);

// The unexpanded form of the same kernel (cos k kept).
KernelMatrix kernel_short_range_exact(double Omega, double k, const ModelParams& params);

// Smaller eigenvalue of the expanded kernel: Omega^2/(2J) + J k^2/2 + (2 zeta - 2J).
double dispersion_expanded(double Omega, double k, const ModelParams& params);

// Boundary-layer decay rate of |G^{ud}(t,t)| in the short-range phase.
double decay_rate(const ModelParams& params);

// F(phi)/N ~ (J / sqrt(zeta (zeta - J))) (1 - cos phi); order-of-magnitude only.
double predict_area_F(double phi, const ModelParams& params);

// Self-energy fluctuation kernel M1 of the S > 0 phase (4x4, SigmaTracks
// basis; zeta is recovered from the saddle as 2P).
KernelMatrix kernel_m1_volume(double Omega, Parity parity, const SaddleParams& saddle);

// Closed forms of the two nonzero eigenvalues of kernel_m1_volume.
std::array<double, 2> m1_volume_eigenvalues(double Omega, const SaddleParams& saddle);

// The two analytic null vectors of kernel_m1_volume in the SigmaTracks basis.
std::array<Eigen::Vector4cd, 2> m1_volume_null_vectors(Parity parity, const SaddleParams& saddle);

// Null space of a SigmaTracks kernel, returned as the induced constraint
// vectors on (dG^{uu}, dG^{dd}, dG^{du}, dG^{ud}).
std::array<Eigen::Vector4cd, 2> zero_mode_constraints(const KernelMatrix& kernel);

// Phase-field kernel blocks of the S > 0 phase.
KernelMatrix kernel_m2_volume(double Omega, double k, const SaddleParams& saddle,
                              const ModelParams& params);

// Coefficient of phi1^2 after integrating out the gapped modes numerically
// (Schur complement with the gap block at k, Omega -> 0).
double reduce_gapless(double k, double Omega, const SaddleParams& saddle,
                      const ModelParams& params);

// The closed form the reduction should reproduce.
double reduce_gapless_closed_form(double k, double Omega, const SaddleParams& saddle,
                                  const ModelParams& params);

struct XYCoefficients {
    double kappa_t = 0.0;  // coefficient of (d_t phi)^2 per N
    double kappa_x = 0.0;  // coefficient of (d_x phi)^2 per N
};

XYCoefficients xy_coefficients(const SaddleParams& saddle, const ModelParams& params);

// F(phi)/N in the long-range phase with the finite-L chord rule; "~" accuracy.
double predict_log_F(double phi, int A_size, int L, const SaddleParams& saddle,
                     const ModelParams& params);

// Eigen-decomposition with the unitary convention, phases fixed by making the
// last nonzero component of each eigenvector real positive.
void unitary_eigensystem(const Eigen::MatrixXcd& hermitian, Eigen::VectorXd& evals,
                         Eigen::MatrixXcd& evecs);

}  // namespace fcs
