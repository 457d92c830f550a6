#include "fcs/solver.hpp"

#include <chrono>
#include <cmath>

namespace fcs {

namespace {

double bare_link_weight(const ContourGrid& grid, const ModelParams& params, int x) {
    return std::exp(-params.zeta * site_sign(x) * grid.dt);
}

std::vector<int> neighbors_of(const ModelParams& params, int x) {
    std::vector<int> nb;
    if (params.periodic) {
        nb.push_back(x == 1 ? params.L : x - 1);
        nb.push_back(x == params.L ? 1 : x + 1);
    } else {
        if (x > 1) nb.push_back(x - 1);
        if (x < params.L) nb.push_back(x + 1);
    }
    return nb;
}

}  // namespace

EqualTimeTracks extract_tracks(const ContourGrid& grid, const ModelParams& params,
                               const Eigen::MatrixXcd& g_loop, int x) {
    const int n_t = grid.n_t;
    const double w = bare_link_weight(grid, params, x);
    EqualTimeTracks t;
    t.resize(n_t);
    for (int s = 0; s < n_t; ++s) {
        const int u = grid.u_point(s);
        const int q = grid.d_point(s);
        t.au(s) = g_loop(u, u);
        t.bu(s) = (s < n_t - 1) ? w * g_loop(u, u + 1) : t.au(s) - 1.0;
        t.ad(s) = g_loop(q, q);
        t.bd(s) = (s >= 1) ? w * g_loop(q, q + 1) : t.ad(s) - 1.0;
        t.ud(s) = g_loop(u, q);
        t.du(s) = g_loop(q, u);
    }
    return t;
}

SelfEnergy self_energy_from_tracks(const std::vector<EqualTimeTracks>& tracks,
                                   const ModelParams& params, const ContourGrid& grid, int x) {
    const int n_t = grid.n_t;
    const double J = params.J, V = params.V;
    const auto& tx = tracks[x - 1];

    Eigen::ArrayXcd nb_su = Eigen::ArrayXcd::Zero(n_t), nb_sd = nb_su,
                    nb_ud = nb_su, nb_du = nb_su;
    for (int y : neighbors_of(params, x)) {
        const auto& ty = tracks[y - 1];
        nb_su += 0.5 * (ty.au + ty.bu);
        nb_sd += 0.5 * (ty.ad + ty.bd);
        nb_ud += ty.ud;
        nb_du += ty.du;
    }

    SelfEnergy s;
    s.resize(n_t);
    // Derived from the interaction functional W: the J channels carry the
    // f^a f^c signs of the action, the diagonal-channel V quartic is
    // regularized as (G^{0+} G^{0-})^2 so the translation-invariant saddle is
    // an exact fixed point.
    s.uu_a = -(J / 4.0) * nb_su - (V / 2.0) * tx.au * tx.bu.square();
    s.uu_b = -(J / 4.0) * nb_su - (V / 2.0) * tx.au.square() * tx.bu;
    s.dd_a = -(J / 4.0) * nb_sd - (V / 2.0) * tx.ad * tx.bd.square();
    s.dd_b = -(J / 4.0) * nb_sd - (V / 2.0) * tx.ad.square() * tx.bd;
    s.ud = (J / 2.0) * nb_ud - V * tx.ud.square() * tx.du;
    s.du = (J / 2.0) * nb_du - V * tx.du.square() * tx.ud;
    return s;
}

SelfEnergy self_energy(const ContourGreens& G, const ModelParams& params, int x) {
    std::vector<EqualTimeTracks> tracks(params.L);
    for (int y = 1; y <= params.L; ++y) {
        tracks[y - 1] = extract_tracks(G.grid, params, G.at(y), y);
    }
    return self_energy_from_tracks(tracks, params, G.grid, x);
}

BandedMatrix dyson_matrix_banded(const ContourGrid& grid, const ModelParams& params,
                                 const TwistSpec& twist, const SelfEnergy& sigma, int x) {
    BandedMatrix m = bare_inverse_banded(grid, params, twist, x);
    const int n_t = grid.n_t;
    const double dt = grid.dt;
    const double w = bare_link_weight(grid, params, x);
    for (int s = 0; s < n_t; ++s) {
        const int bu = grid.banded_of(grid.u_point(s));   // 2s
        const int bd = grid.banded_of(grid.d_point(s));   // 2s+1
        m.add(bu, bu, -dt * sigma.uu_a(s));
        if (s < n_t - 1) {
            m.add(bu + 2, bu, -dt * w * sigma.uu_b(s));
        } else {
            m.add(bu, bu, -dt * sigma.uu_b(s));  // fold slice: beta extractor is alpha - 1
        }
        m.add(bd, bd, -dt * sigma.dd_a(s));
        if (s >= 1) {
            m.add(bd - 2, bd, -dt * w * sigma.dd_b(s));  // loop successor of d_s is d slice s-1
        } else {
            m.add(bd, bd, -dt * sigma.dd_b(s));
        }
        m.add(bu, bd, -dt * sigma.ud(s));
        m.add(bd, bu, -dt * sigma.du(s));
    }
    return m;
}

namespace {

Eigen::MatrixXcd banded_inverse_to_loop(const ContourGrid& grid, const Eigen::MatrixXcd& g_banded) {
    const int D = grid.points();
    Eigen::MatrixXcd g(D, D);
    std::vector<int> b(D);
    for (int p = 0; p < D; ++p) b[p] = grid.banded_of(p);
    for (int pc = 0; pc < D; ++pc) {
        for (int pr = 0; pr < D; ++pr) g(pr, pc) = g_banded(b[pr], b[pc]);
    }
    return g;
}

}  // namespace

Eigen::MatrixXcd dyson_invert(const BareInverseProp& d0, const SelfEnergy& sigma,
                              const ContourGrid& grid, const ModelParams& params,
                              const TwistSpec& twist) {
    BandedMatrix m = dyson_matrix_banded(grid, params, twist, sigma, d0.x);
    BandedLU lu(m);
    if (lu.singular()) {
        throw NumericalError("dyson_invert: singular inverse propagator at site " +
                             std::to_string(d0.x) + ", phi = " + std::to_string(twist.phi));
    }
    Eigen::MatrixXcd g = banded_inverse_to_loop(grid, lu.inverse());
    // residual check against the loop-ordered bare matrix with the same sigma
    const int D = grid.points();
    Eigen::MatrixXcd m_loop = d0.m;
    Eigen::MatrixXcd m_banded_dense = m.dense();
    for (int pc = 0; pc < D; ++pc) {
        for (int pr = 0; pr < D; ++pr) {
            m_loop(pr, pc) = m_banded_dense(grid.banded_of(pr), grid.banded_of(pc));
        }
    }
    const double resid = (m_loop * g - Eigen::MatrixXcd::Identity(D, D)).cwiseAbs().maxCoeff();
    if (!(resid < 1e-10)) {
        throw NumericalError("dyson_invert: residual " + std::to_string(resid) +
                             " exceeds 1e-10 at site " + std::to_string(d0.x) +
                             ", phi = " + std::to_string(twist.phi));
    }
    return g;
}

SolveResult solve_fixed_point(const ModelParams& params, const TwistSpec& twist,
                              const ContourGrid& grid, const SolveOptions& opts,
                              const std::vector<SelfEnergy>* continuation) {
    params.validate();
    twist.validate(params.L);
    opts.validate();
    grid.check_resolution(params);
    const auto t_start = std::chrono::steady_clock::now();

    const int L = params.L;
    const int n_t = grid.n_t;
    const int D = grid.points();

    std::vector<SelfEnergy> sigma(L);
    switch (opts.init) {
        case InitKind::Zero:
            for (auto& s : sigma) s.resize(n_t);
            break;
        case InitKind::AnalyticSaddle: {
            const SaddleParams sp = solve_saddle(params);
            for (int x = 1; x <= L; ++x) {
                auto& s = sigma[x - 1];
                s.resize(n_t);
                const double diag = site_sign(x) * (params.zeta - sp.P);
                s.uu_a.setConstant(0.5 * diag);
                s.uu_b.setConstant(0.5 * diag);
                s.dd_a.setConstant(0.5 * diag);
                s.dd_b.setConstant(0.5 * diag);
                s.ud.setConstant(sp.S / sp.z);
                s.du.setConstant(-sp.z * sp.S);
            }
            break;
        }
        case InitKind::Continuation:
            if (continuation == nullptr || static_cast<int>(continuation->size()) != L) {
                throw ConfigError("solve_fixed_point: continuation init requires a previous self-energy");
            }
            sigma = *continuation;
            break;
    }

    ContourGreens G;
    G.grid = grid;
    G.site.assign(L, Eigen::MatrixXcd());
    std::vector<Eigen::MatrixXcd> g_prev(L);
    std::vector<EqualTimeTracks> tracks(L);

    SolveMeta meta;
    double delta = std::numeric_limits<double>::infinity();
    const double alpha = opts.damping;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        for (int x = 1; x <= L; ++x) {
            BandedMatrix m = dyson_matrix_banded(grid, params, twist, sigma[x - 1], x);
            BandedLU lu(m);
            if (lu.singular()) {
                throw NumericalError("solve_fixed_point: singular Dyson matrix at site " +
                                     std::to_string(x) + ", phi = " + std::to_string(twist.phi) +
                                     ", iteration " + std::to_string(iter));
            }
            G.site[x - 1] = banded_inverse_to_loop(grid, lu.inverse());
        }

        if (iter > 0) {
            delta = 0.0;
            for (int x = 0; x < L; ++x) {
                delta = std::max(delta, (G.site[x] - g_prev[x]).cwiseAbs().maxCoeff());
            }
            meta.delta_tail.push_back(delta);
            if (meta.delta_tail.size() > 10) meta.delta_tail.erase(meta.delta_tail.begin());
        }
        meta.iterations = iter + 1;
        meta.final_delta = delta;
        if (delta < opts.tol) {
            meta.converged = true;
            break;
        }

        for (int x = 1; x <= L; ++x) tracks[x - 1] = extract_tracks(grid, params, G.site[x - 1], x);
        for (int x = 1; x <= L; ++x) {
            SelfEnergy fresh = self_energy_from_tracks(tracks, params, grid, x);
            auto& s = sigma[x - 1];
            s.uu_a = alpha * fresh.uu_a + (1.0 - alpha) * s.uu_a;
            s.uu_b = alpha * fresh.uu_b + (1.0 - alpha) * s.uu_b;
            s.dd_a = alpha * fresh.dd_a + (1.0 - alpha) * s.dd_a;
            s.dd_b = alpha * fresh.dd_b + (1.0 - alpha) * s.dd_b;
            s.ud = alpha * fresh.ud + (1.0 - alpha) * s.ud;
            s.du = alpha * fresh.du + (1.0 - alpha) * s.du;
        }
        for (int x = 0; x < L; ++x) g_prev[x] = G.site[x];
    }

    meta.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    if (!meta.converged) {
        std::string trace;
        for (double d : meta.delta_tail) trace += " " + std::to_string(d);
        throw ConvergenceError("solve_fixed_point: no convergence after " +
                                   std::to_string(meta.iterations) + " iterations at phi = " +
                                   std::to_string(twist.phi) + "; delta trace:" + trace,
                               meta.final_delta, meta.iterations);
    }

    SolveResult out{std::move(G), std::move(sigma), std::move(meta)};
    (void)D;
    return out;
}

BulkExtraction extract_bulk_saddle(const ContourGreens& G, const ModelParams& params) {
    const ContourGrid& grid = G.grid;
    const int n_t = grid.n_t;
    // adjacent bulk sites, one of each parity; x_odd has unit equal-time
    // amplitude on the decaying u-branch direction
    const int x_mid = params.L / 2;
    const int x_odd = (x_mid % 2 == 1) ? x_mid : x_mid + 1;
    const auto t_odd = extract_tracks(grid, params, G.at(x_odd), x_odd);

    const int s0 = n_t / 2;
    cplx m1{0.0, 0.0}, m2{0.0, 0.0};
    const int avg = 2;
    for (int s = s0 - avg; s <= s0 + avg; ++s) {
        m1 += t_odd.ud(s) * t_odd.du(s);
        m2 += 0.5 * (t_odd.au(s) + t_odd.bu(s));
    }
    m1 /= (2 * avg + 1);
    m2 /= (2 * avg + 1);

    // decay-rate fit of |G^{uu}(t0 + tau, t0)| over tau > 0 (row later in time)
    const auto& g = G.at(x_odd);
    auto fit_rate = [&](double tau_max) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (int k = 1; k <= n_t / 2 - 2; ++k) {
            const double tau = k * grid.dt;
            if (tau > tau_max) break;
            const double v = std::abs(g(grid.u_point(s0 - avg + k), grid.u_point(s0 - avg)));
            if (v <= 0) break;
            const double lx = tau, ly = std::log(v);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
            ++n;
        }
        if (n < 3) return 0.0;
        return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    double rate = fit_rate(grid.T / 8.0);
    if (rate > 0) rate = fit_rate(std::min(2.5 / rate, grid.T / 4.0));

    BulkExtraction out;
    out.decay_rate = rate;
    const double s2 = -m1.real();
    out.S = 2.0 * rate * std::sqrt(std::max(0.0, s2));
    out.P = 2.0 * rate * m2.real();  // odd site: Su = +P/(2R)
    return out;
}

}  // namespace fcs
