// model.hpp — Model parameters of the Brownian non-Hermitian complex SYK chain.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace fcs {

using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};

// Domain / configuration error (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure that is not a convergence failure (bad bracket, singular matrix).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fixed-point iteration did not reach tolerance (CLI exit code 3).
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& msg, double last_delta, int iterations)
        : std::runtime_error(msg), last_delta(last_delta), iterations(iterations) {}
    double last_delta;
    int iterations;
};

enum class Parity { Odd, Even };

// Staggered sign (-1)^(x-1) for 1-based site index x.
inline int parity_sign(Parity p) { return p == Parity::Odd ? +1 : -1; }
inline Parity site_parity(int x) { return (x % 2 == 1) ? Parity::Odd : Parity::Even; }
inline int site_sign(int x) { return parity_sign(site_parity(x)); }

// Couplings and geometry. J and V are the Brownian variance strengths of the
// hopping and on-site interaction, zeta the staggered imaginary potential
// depth, mu the chemical potential of the initial density matrix (z = e^{mu/2}).
struct ModelParams {
    double J = 1.0;
    double V = 0.0;
    double zeta = 0.5;
    double mu = 0.5;
    int L = 20;
    double T = 10.0;
    int N = 1;           // flavor count; reporting multiplier only
    bool periodic = false;

    void validate() const {
        if (J < 0) throw ConfigError("ModelParams: J must be >= 0");
        if (V < 0) throw ConfigError("ModelParams: V must be >= 0");
        if (zeta < 0) throw ConfigError("ModelParams: zeta must be >= 0");
        if (L < 2 || L % 2 != 0) throw ConfigError("ModelParams: L must be even and >= 2");
        if (T <= 0) throw ConfigError("ModelParams: T must be > 0");
        if (N < 1) throw ConfigError("ModelParams: N must be >= 1");
    }

    double z() const { return std::exp(mu / 2.0); }
};

}  // namespace fcs
