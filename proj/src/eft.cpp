#include "fcs/eft.hpp"

#include <cmath>

namespace fcs {

KernelMatrix kernel_short_range(double Omega, double k, const ModelParams& params) {
    const double J = params.J, zeta = params.zeta;
    KernelMatrix out;
    out.basis = KernelBasis::GudMomentum;
    out.Omega = Omega;
    out.k = k;
    out.m.resize(2, 2);
    out.m << cplx{-2.0 * zeta + 2.0 * J - J * k * k / 2.0, 0.0}, I * Omega,
             I * Omega, cplx{-2.0 * zeta, 0.0};
    return out;
}

KernelMatrix kernel_short_range_exact(double Omega, double k, const ModelParams& params) {
    const double J = params.J, zeta = params.zeta;
    KernelMatrix out;
    out.basis = KernelBasis::GudMomentum;
    out.Omega = Omega;
    out.k = k;
    out.m.resize(2, 2);
    out.m << cplx{2.0 * zeta - J * std::cos(k) - J, 0.0}, -I * Omega,
             -I * Omega, cplx{2.0 * zeta + J * std::cos(k) - J, 0.0};
    return out;
}

double dispersion_expanded(double Omega, double k, const ModelParams& params) {
    return Omega * Omega / (2.0 * params.J) + params.J * k * k / 2.0 +
           2.0 * (params.zeta - params.J);
}

double decay_rate(const ModelParams& params) {
    if (params.zeta < params.J) throw ConfigError("decay_rate: requires zeta >= J");
    return 2.0 * std::sqrt(params.zeta * (params.zeta - params.J));
}

double predict_area_F(double phi, const ModelParams& params) {
    if (params.zeta <= params.J) throw ConfigError("predict_area_F: requires zeta > J");
    return params.J / std::sqrt(params.zeta * (params.zeta - params.J)) * (1.0 - std::cos(phi));
}

KernelMatrix kernel_m1_volume(double Omega, Parity parity, const SaddleParams& saddle) {
    if (!(saddle.S > 0)) throw ConfigError("kernel_m1_volume: requires S > 0");
    const double S = saddle.S, z = saddle.z;
    const double zeta = 2.0 * saddle.P;  // P = zeta/2 on the S > 0 branch
    const double m = -1.0 * parity_sign(parity);  // (-1)^x
    const double W2 = zeta * zeta + 4.0 * S * S;
    const double W = std::sqrt(W2);
    const cplx zm_p = zeta * m + I * Omega;  // zeta (-1)^x + i Omega
    const cplx zm_m = zeta * m - I * Omega;

    Eigen::Matrix4cd k;
    k(0, 0) = S * S;
    k(0, 1) = S * S;
    k(0, 2) = -0.5 * S * z * zm_p;
    k(0, 3) = S * zm_m / (2.0 * z);
    k.row(1) = k.row(0);
    k(2, 0) = -0.5 * S * z * zm_m;
    k(2, 1) = k(2, 0);
    k(2, 2) = -S * S * z * z;
    k(2, 3) = 0.5 * (-2.0 * S * S - zeta * (zeta - I * m * Omega));
    k(3, 0) = S * zm_p / (2.0 * z);
    k(3, 1) = k(3, 0);
    k(3, 2) = 0.5 * (-2.0 * S * S - zeta * (zeta + I * m * Omega));
    k(3, 3) = -S * S / (z * z);

    KernelMatrix out;
    out.basis = KernelBasis::SigmaTracks;
    out.Omega = Omega;
    out.parity_sign = parity_sign(parity);
    out.m = k / (W * (W2 + Omega * Omega));
    out.hermitian = out.m.isApprox(out.m.adjoint(), 1e-12);
    return out;
}

std::array<double, 2> m1_volume_eigenvalues(double Omega, const SaddleParams& saddle) {
    const double S = saddle.S, z = saddle.z;
    const double zeta = 2.0 * saddle.P;
    const double S2 = S * S, z2 = z * z, z4 = z2 * z2;
    const double W2 = zeta * zeta + 4.0 * S2;
    const double W = std::sqrt(W2);
    const double inner = Omega * Omega * z2 * (2.0 * S2 * (z4 + 1.0) + zeta * zeta * z2) +
                         std::pow(S2 * (z2 + 1.0) * (z2 + 1.0) + zeta * zeta * z2, 2);
    const double root = std::sqrt(inner);
    const double shift = S2 * (z2 - 1.0) * (z2 - 1.0);
    const double denom = 2.0 * z2 * W * (W2 + Omega * Omega);
    return {(root - shift) / denom, (-root - shift) / denom};
}

std::array<Eigen::Vector4cd, 2> m1_volume_null_vectors(Parity parity, const SaddleParams& saddle) {
    const double S = saddle.S, z = saddle.z;
    const double zeta = 2.0 * saddle.P;
    const double m = -1.0 * parity_sign(parity);  // (-1)^x
    Eigen::Vector4cd u1, u2;
    u1 << 1.0, -1.0, 0.0, 0.0;
    u2 << 0.0, -m * zeta / (S * z), -1.0 / (z * z), 1.0;  // (-1)^{x+1} = -(-1)^x
    return {u1, u2};
}

std::array<Eigen::Vector4cd, 2> zero_mode_constraints(const KernelMatrix& kernel) {
    if (kernel.basis != KernelBasis::SigmaTracks) {
        throw ConfigError("zero_mode_constraints: kernel must be in the SigmaTracks basis");
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(kernel.m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double scale = sv(0);
    if (!(sv(2) < 1e-8 * scale && sv(3) < 1e-8 * scale)) {
        throw NumericalError("zero_mode_constraints: kernel does not have two zero modes");
    }
    // The sigma-G coupling swaps ud <-> du, so a null vector u of the kernel
    // constrains g~ = (dG^{uu}, dG^{dd}, dG^{du}, dG^{ud}) via (C u)^T g~ = 0
    // with C the ud<->du swap.
    std::array<Eigen::Vector4cd, 2> out;
    for (int i = 0; i < 2; ++i) {
        Eigen::Vector4cd u = svd.matrixV().col(3 - i);
        Eigen::Vector4cd c;
        c << u(0), u(1), u(3), u(2);
        // deterministic phase: last nonzero component real positive
        for (int j = 3; j >= 0; --j) {
            if (std::abs(c(j)) > 1e-12) {
                c *= std::conj(c(j)) / std::abs(c(j));
                break;
            }
        }
        out[i] = c;
    }
    return out;
}

namespace {

// M_gap block of the phi-field kernel (3x3).
Eigen::Matrix3cd m_gap(double Omega, double k, double zeta, double S, double z, double J) {
    const double S2 = S * S, z2 = z * z, z4 = z2 * z2;
    const double W2 = zeta * zeta + 4.0 * S2;
    const double W = std::sqrt(W2);
    const double ck = std::cos(k);
    const double zp = (z4 + 1.0) * (z4 + 1.0);
    Eigen::Matrix3cd g;
    g(0, 0) = -J * S2 * (ck + 1.0) / (2.0 * W2);
    g(0, 1) = -I * S2 * Omega * (z4 + 1.0) / (4.0 * zeta * z2 * W);
    g(0, 2) = J * S2 * (z4 - 1.0) * (ck + 1.0) / (4.0 * z2 * W2);
    g(1, 0) = I * S2 * Omega * (z4 + 1.0) / (4.0 * zeta * z2 * W);
    g(1, 1) = S2 *
              (-J * ck * (S2 * zp + zeta * zeta * z4) - 3.0 * J * S2 * zp -
               zeta * zeta * J * (z4 * z4 + z4 + 1.0) + zp * W2 * W) /
              (2.0 * zeta * zeta * z4 * W2);
    g(1, 2) = 0.0;
    g(2, 0) = g(0, 2);
    g(2, 1) = 0.0;
    g(2, 2) = S2 *
              (J * ck * (S2 * zp + zeta * zeta * z4) - 3.0 * J * S2 * zp -
               zeta * zeta * J * (z4 * z4 + z4 + 1.0) + zp * W2 * W) /
              (2.0 * zeta * zeta * z4 * W2);
    return g;
}

Eigen::RowVector3cd v_block(double Omega, double k, double zeta, double S, double z, double J) {
    const double S2 = S * S, z2 = z * z, z4 = z2 * z2;
    const double W2 = zeta * zeta + 4.0 * S2;
    const double W = std::sqrt(W2);
    Eigen::RowVector3cd v;
    v << 0.0, -J * S2 * (z4 - 1.0) * (std::cos(k) - 1.0) / (4.0 * z2 * W2),
        -I * S2 * Omega * (z4 + 1.0) / (4.0 * zeta * z2 * W);
    return v;
}

}  // namespace

KernelMatrix kernel_m2_volume(double Omega, double k, const SaddleParams& saddle,
                              const ModelParams& params) {
    if (!(saddle.S > 0)) throw ConfigError("kernel_m2_volume: requires S > 0");
    const double zeta = 2.0 * saddle.P;
    const double S = saddle.S, z = saddle.z, J = params.J;
    const double W2 = zeta * zeta + 4.0 * S * S;
    KernelMatrix out;
    out.basis = KernelBasis::PhiFields;
    out.Omega = Omega;
    out.k = k;
    out.m.resize(4, 4);
    out.m(0, 0) = J * S * S * (std::cos(k) - 1.0) / (2.0 * W2);
    out.m.block<1, 3>(0, 1) = v_block(Omega, k, zeta, S, z, J);
    out.m.block<3, 1>(1, 0) = v_block(Omega, k, zeta, S, z, J).adjoint();
    out.m.block<3, 3>(1, 1) = m_gap(Omega, k, zeta, S, z, J);
    out.hermitian = out.m.isApprox(out.m.adjoint(), 1e-12);
    return out;
}

double reduce_gapless(double k, double Omega, const SaddleParams& saddle,
                      const ModelParams& params) {
    if (!(saddle.S > 0)) throw ConfigError("reduce_gapless: requires S > 0");
    const double zeta = 2.0 * saddle.P;
    const double S = saddle.S, z = saddle.z, J = params.J;
    const double S2 = S * S, z2 = z * z, z4 = z2 * z2;
    const double W2 = zeta * zeta + 4.0 * S2;
    const double W = std::sqrt(W2);

    const double top = J * S2 * (std::cos(k) - 1.0) / (2.0 * W2);
    // leading-order v: cos k - 1 -> -k^2/2
    Eigen::RowVector3cd v_lead;
    v_lead << 0.0, J * k * k * S2 * (z4 - 1.0) / (8.0 * z2 * W2),
        -I * S2 * Omega * (z4 + 1.0) / (4.0 * zeta * z2 * W);
    const Eigen::Matrix3cd gap0 = m_gap(0.0, 0.0, zeta, S, z, J);
    const cplx schur = (v_lead * gap0.inverse() * v_lead.adjoint())(0, 0);
    return top - schur.real();
}

double reduce_gapless_closed_form(double k, double Omega, const SaddleParams& saddle,
                                  const ModelParams& params) {
    const double zeta = 2.0 * saddle.P;
    const double S2 = saddle.S * saddle.S;
    const double W2 = zeta * zeta + 4.0 * S2;
    const double W = std::sqrt(W2);
    return -(params.J * k * k * S2 / (4.0 * W2) +
             S2 * Omega * Omega / (4.0 * W2 * (2.0 * W - params.J)));
}

XYCoefficients xy_coefficients(const SaddleParams& saddle, const ModelParams& params) {
    if (!(saddle.S > 0)) throw ConfigError("xy_coefficients: requires S > 0");
    const double zeta = 2.0 * saddle.P;
    const double S2 = saddle.S * saddle.S;
    const double W2 = zeta * zeta + 4.0 * S2;
    const double W = std::sqrt(W2);
    XYCoefficients out;
    out.kappa_t = S2 / (4.0 * W2 * (2.0 * W - params.J));
    out.kappa_x = params.J * S2 / (4.0 * W2);
    return out;
}

double predict_log_F(double phi, int A_size, int L, const SaddleParams& saddle,
                     const ModelParams& params) {
    if (!(saddle.S > 0)) throw ConfigError("predict_log_F: requires S > 0");
    if (A_size <= 0 || A_size >= L) throw ConfigError("predict_log_F: need 0 < |A| < L");
    const double zeta = 2.0 * saddle.P;
    const double S2 = saddle.S * saddle.S;
    const double W2 = zeta * zeta + 4.0 * S2;
    const double W = std::sqrt(W2);
    const double chord = L * std::sin(M_PI * A_size / L) / M_PI;
    return S2 * phi * phi / W2 * std::sqrt(params.J / (2.0 * W - params.J)) * std::log(chord);
}

void unitary_eigensystem(const Eigen::MatrixXcd& hermitian, Eigen::VectorXd& evals,
                         Eigen::MatrixXcd& evecs) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian);
    if (es.info() != Eigen::Success) throw NumericalError("unitary_eigensystem: decomposition failed");
    evals = es.eigenvalues();
    evecs = es.eigenvectors();
    for (Eigen::Index c = 0; c < evecs.cols(); ++c) {
        for (Eigen::Index r = evecs.rows() - 1; r >= 0; --r) {
            if (std::abs(evecs(r, c)) > 1e-12) {
                evecs.col(c) *= std::conj(evecs(r, c)) / std::abs(evecs(r, c));
                break;
            }
        }
    }
}

}  // namespace fcs
