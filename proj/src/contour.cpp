#include "fcs/contour.hpp"

#include <cmath>

namespace fcs {

void ContourGrid::check_resolution(const ModelParams& params) const {
    const double limit = 0.1;
    if (dt * params.J > limit)
        throw ConfigError("ContourGrid: dt*J = " + std::to_string(dt * params.J) +
                          " exceeds the resolution guard 0.1 (offending coupling: J)");
    if (dt * params.V > limit)
        throw ConfigError("ContourGrid: dt*V = " + std::to_string(dt * params.V) +
                          " exceeds the resolution guard 0.1 (offending coupling: V)");
    if (dt * params.zeta > limit)
        throw ConfigError("ContourGrid: dt*zeta = " + std::to_string(dt * params.zeta) +
                          " exceeds the resolution guard 0.1 (offending coupling: zeta)");
}

ContourGrid build_grid(double T, int n_t) {
    if (n_t < 16) throw ConfigError("build_grid: n_t must be >= 16");
    if (T <= 0) throw ConfigError("build_grid: T must be > 0");
    ContourGrid g;
    g.n_t = n_t;
    g.T = T;
    g.dt = T / n_t;
    return g;
}

ContourGrid build_grid(const ModelParams& params, int n_t) {
    ContourGrid g = build_grid(params.T, n_t);
    g.check_resolution(params);
    return g;
}

std::pair<cplx, cplx> boundary_weights(const TwistSpec& twist, double mu, int x) {
    const cplx phase = twist.in_A(x) ? std::exp(I * twist.phi) : cplx{1.0, 0.0};
    const cplx w_fold_T = phase;
    const cplx w_fold_0 = -std::exp(-mu) * std::conj(phase);
    return {w_fold_T, w_fold_0};
}

std::vector<cplx> link_weights(const ContourGrid& grid, const ModelParams& params,
                               const TwistSpec& twist, int x) {
    const int D = grid.points();
    // Both branches decay identically under the staggered imaginary potential:
    // the non-unitary term has no contour-dependent prefactor.
    const double w_step = std::exp(-params.zeta * site_sign(x) * grid.dt);
    std::vector<cplx> w(D, cplx{w_step, 0.0});
    const auto [w_T, w_0] = boundary_weights(twist, params.mu, x);
    w[grid.n_t] *= w_T;  // link u_{n_t-1} -> d_{n_t} at the t=T fold
    w[0] *= w_0;         // link d_{2n_t-1} -> u_0 at the t=0 fold
    return w;
}

BareInverseProp bare_inverse_propagator(const ContourGrid& grid, const ModelParams& params,
                                        const TwistSpec& twist, int x) {
    params.validate();
    twist.validate(params.L);
    const int D = grid.points();
    const auto w = link_weights(grid, params, twist, x);
    BareInverseProp out;
    out.x = x;
    out.m = Eigen::MatrixXcd::Identity(D, D);
    for (int p = 0; p < D; ++p) {
        const int prev = (p + D - 1) % D;
        out.m(p, prev) -= w[p];
    }
    return out;
}

BandedMatrix bare_inverse_banded(const ContourGrid& grid, const ModelParams& params,
                                 const TwistSpec& twist, int x) {
    const int D = grid.points();
    const auto w = link_weights(grid, params, twist, x);
    BandedMatrix m(D, 2, 2);
    for (int b = 0; b < D; ++b) m.at(b, b) = cplx{1.0, 0.0};
    for (int p = 0; p < D; ++p) {
        const int prev = (p + D - 1) % D;
        m.add(grid.banded_of(p), grid.banded_of(prev), -w[p]);
    }
    return m;
}

}  // namespace fcs
