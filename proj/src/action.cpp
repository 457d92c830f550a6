#include "fcs/action.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace fcs {

cplx logdet(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) throw ConfigError("logdet: matrix must be square");
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    const auto& u = lu.matrixLU();
    cplx acc{0.0, 0.0};
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const cplx d = u(i, i);
        if (d == cplx{0.0, 0.0}) throw NumericalError("logdet: singular matrix");
        acc += std::log(d);
    }
    // permutation sign
    Eigen::VectorXi p = lu.permutationP().indices();
    int swaps = 0;
    for (int i = 0; i < p.size(); ++i) {
        while (p(i) != i) {
            std::swap(p(i), p(p(i)));
            ++swaps;
        }
    }
    if (swaps % 2 == 1) acc += cplx{0.0, M_PI};
    return acc;
}

cplx unwind_imag(cplx value, cplx previous) {
    const double k = std::round((previous.imag() - value.imag()) / (2.0 * M_PI));
    return value + cplx{0.0, 2.0 * M_PI * k};
}

cplx logdet(const Eigen::MatrixXcd& m, cplx previous) { return unwind_imag(logdet(m), previous); }

namespace {

// Per-site interaction functional W and the literal Tr[Sigma_hat G] pairing.
// Everything is evaluated from the equal-time tracks so the composite action
// is exactly stationary at the solver's fixed point.
struct SiteTerms {
    cplx tr_sigma_g{0.0, 0.0};
    cplx w{0.0, 0.0};
};

SiteTerms site_terms(const std::vector<EqualTimeTracks>& tracks,
                     const std::vector<SelfEnergy>& sigma, const ModelParams& params,
                     const ContourGrid& grid, int x) {
    const int n_t = grid.n_t;
    const double dt = grid.dt;
    const double J = params.J, V = params.V;
    const auto& tx = tracks[x - 1];
    const auto& sx = sigma[x - 1];

    Eigen::ArrayXcd nb_su = Eigen::ArrayXcd::Zero(n_t), nb_sd = nb_su, nb_ud = nb_su, nb_du = nb_su;
    auto add_neighbor = [&](int y) {
        const auto& ty = tracks[y - 1];
        nb_su += 0.5 * (ty.au + ty.bu);
        nb_sd += 0.5 * (ty.ad + ty.bd);
        nb_ud += ty.ud;
        nb_du += ty.du;
    };
    if (params.periodic) {
        add_neighbor(x == 1 ? params.L : x - 1);
        add_neighbor(x == params.L ? 1 : x + 1);
    } else {
        if (x > 1) add_neighbor(x - 1);
        if (x < params.L) add_neighbor(x + 1);
    }

    SiteTerms out;
    for (int s = 0; s < n_t; ++s) {
        // literal matrix pairing: the fold-slice beta placements sit on the diagonal
        const cplx gu_b = (s < n_t - 1) ? tx.bu(s) : tx.au(s);
        const cplx gd_b = (s >= 1) ? tx.bd(s) : tx.ad(s);
        out.tr_sigma_g += dt * (sx.uu_a(s) * tx.au(s) + sx.uu_b(s) * gu_b +
                                sx.dd_a(s) * tx.ad(s) + sx.dd_b(s) * gd_b +
                                sx.ud(s) * tx.du(s) + sx.du(s) * tx.ud(s));

        const cplx su = 0.5 * (tx.au(s) + tx.bu(s));
        const cplx sd = 0.5 * (tx.ad(s) + tx.bd(s));
        cplx w_j = (J / 4.0) * (nb_su(s) * su + nb_sd(s) * sd) -
                   (J / 4.0) * (nb_ud(s) * tx.du(s) + nb_du(s) * tx.ud(s));
        cplx aubu = tx.au(s) * tx.bu(s);
        cplx adbd = tx.ad(s) * tx.bd(s);
        cplx uddu = tx.ud(s) * tx.du(s);
        cplx w_v = (V / 4.0) * (aubu * aubu + adbd * adbd) + (V / 2.0) * (uddu * uddu);
        out.w += dt * (w_j + w_v);
    }
    return out;
}

}  // namespace

cplx on_shell_action(const ContourGreens& G, const std::vector<SelfEnergy>& Sigma,
                     const ModelParams& params, const ContourGrid& grid, const TwistSpec& twist,
                     const std::vector<cplx>* prev_site_logdets,
                     std::vector<cplx>* site_logdets_out) {
    const int L = params.L;
    std::vector<EqualTimeTracks> tracks(L);
    for (int x = 1; x <= L; ++x) tracks[x - 1] = extract_tracks(grid, params, G.at(x), x);

    cplx total{0.0, 0.0};
    std::vector<cplx> lds(L);
    for (int x = 1; x <= L; ++x) {
        BandedMatrix m = dyson_matrix_banded(grid, params, twist, Sigma[x - 1], x);
        BandedLU lu(m);
        if (lu.singular()) {
            throw NumericalError("on_shell_action: singular Dyson matrix at site " +
                                 std::to_string(x) + ", phi = " + std::to_string(twist.phi));
        }
        cplx ld = lu.logdet();
        if (prev_site_logdets) ld = unwind_imag(ld, (*prev_site_logdets)[x - 1]);
        lds[x - 1] = ld;
        const SiteTerms terms = site_terms(tracks, Sigma, params, grid, x);
        total += ld + terms.tr_sigma_g + terms.w;
    }
    if (site_logdets_out) *site_logdets_out = std::move(lds);
    return total;
}

Baseline compute_baseline(const ModelParams& params, const ContourGrid& grid,
                          const SolveOptions& opts) {
    TwistSpec none{0.0, 0};
    SolveResult r = solve_fixed_point(params, none, grid, opts);
    Baseline b;
    b.minus_I0 = on_shell_action(r.G, r.Sigma, params, grid, none, nullptr, &b.site_logdets);
    b.sigma0 = std::move(r.Sigma);
    b.meta = r.meta;
    return b;
}

FcsResult fcs_point(const ModelParams& params, const TwistSpec& twist, const ContourGrid& grid,
                    const SolveOptions& opts) {
    return fcs_point(params, twist, grid, opts, compute_baseline(params, grid, opts));
}

FcsResult fcs_point(const ModelParams& params, const TwistSpec& twist, const ContourGrid& grid,
                    const SolveOptions& opts, const Baseline& baseline) {
    FcsResult out;
    out.phi = twist.phi;
    out.A_size = twist.A_size;
    if (twist.phi == 0.0) {
        out.f_per_N = cplx{0.0, 0.0};  // ratio of identical solves, exactly zero
        out.converged = true;
        out.meta = baseline.meta;
        return out;
    }
    SolveOptions o = opts;
    o.init = InitKind::Continuation;
    SolveResult r = solve_fixed_point(params, twist, grid, o, &baseline.sigma0);
    const cplx minus_I_phi =
        on_shell_action(r.G, r.Sigma, params, grid, twist, &baseline.site_logdets, nullptr);
    out.f_per_N = baseline.minus_I0 - minus_I_phi;
    out.converged = true;
    out.meta = r.meta;
    return out;
}

namespace {

struct ChainState {
    double theta = 0.0;
    std::vector<SelfEnergy> sigma;
    std::vector<cplx> site_logdets;
};

// One continuation step: solve at theta, update state, return -I(theta).
cplx chain_step(const ModelParams& params, const ContourGrid& grid, const SolveOptions& opts,
                int A_size, double theta, ChainState& state, SolveMeta* meta_out,
                SigmaCache* cache) {
    TwistSpec tw{theta, A_size};
    SolveOptions o = opts;
    o.init = InitKind::Continuation;
    std::vector<SelfEnergy> warm;
    if (cache && cache->load(params, grid, tw, warm)) state.sigma = std::move(warm);
    SolveResult r = [&] {
        try {
            return solve_fixed_point(params, tw, grid, o, &state.sigma);
        } catch (const ConvergenceError&) {
            SolveOptions retry = o;
            retry.damping = 0.5 * o.damping;
            retry.max_iters = 2 * o.max_iters;
            return solve_fixed_point(params, tw, grid, retry, &state.sigma);
        }
    }();
    std::vector<cplx> lds;
    const cplx minus_I = on_shell_action(r.G, r.Sigma, params, grid, tw,
                                         state.site_logdets.empty() ? nullptr : &state.site_logdets,
                                         &lds);
    state.sigma = std::move(r.Sigma);
    state.site_logdets = std::move(lds);
    state.theta = theta;
    if (meta_out) *meta_out = r.meta;
    if (cache) cache->store(params, grid, tw, state.sigma);
    return minus_I;
}

// Walk a chain of target angles (monotone in |theta|, one sign), inserting
// intermediate steps, and record results at the targets.
void run_chain(const ModelParams& params, const ContourGrid& grid, const SolveOptions& opts,
               const SweepOptions& sweep_opts, int A_size, const std::vector<double>& targets,
               BranchTag tag, const Baseline& baseline, std::vector<FcsResult>& out,
               SigmaCache* cache) {
    if (targets.empty()) return;
    ChainState state;
    state.sigma = baseline.sigma0;
    state.site_logdets = baseline.site_logdets;
    const double dir = targets.front() >= 0 ? 1.0 : -1.0;
    bool dead = false;
    std::string dead_reason;
    for (double target : targets) {
        FcsResult res;
        res.A_size = A_size;
        res.branch = tag;
        // report the physical angle in (-pi, pi]
        double phys = target;
        while (phys > M_PI) phys -= 2.0 * M_PI;
        while (phys <= -M_PI) phys += 2.0 * M_PI;
        res.phi = phys;
        if (dead) {
            res.converged = false;
            res.error = dead_reason;
            out.push_back(std::move(res));
            continue;
        }
        try {
            while (std::abs(state.theta - target) > 1e-12) {
                const double next =
                    dir * std::min(std::abs(target), std::abs(state.theta) + sweep_opts.continuation_step);
                SolveMeta meta;
                const cplx minus_I = chain_step(params, grid, opts, A_size, next, state, &meta, cache);
                if (std::abs(next - target) <= 1e-12) {
                    res.f_per_N = baseline.minus_I0 - minus_I;
                    res.converged = true;
                    res.meta = meta;
                }
            }
            if (!res.converged) {  // target was already at state.theta (duplicate)
                res.error = "duplicate target angle";
            }
        } catch (const std::exception& e) {
            res.converged = false;
            res.error = e.what();
            dead = true;
            dead_reason = std::string("chain stopped earlier: ") + e.what();
        }
        out.push_back(std::move(res));
    }
}

}  // namespace

std::vector<FcsResult> fcs_sweep(const ModelParams& params, const std::vector<double>& phis,
                                 const std::vector<int>& A_sizes, const ContourGrid& grid,
                                 const SolveOptions& opts, const SweepOptions& sweep_opts,
                                 SigmaCache* cache) {
    params.validate();
    for (double p : phis) {
        if (p <= -M_PI - 1e-12 || p > M_PI + 1e-12)
            throw ConfigError("fcs_sweep: phi must lie in (-pi, pi]");
    }
    const Baseline baseline = compute_baseline(params, grid, opts);

    struct ChainJob {
        int A;
        std::vector<double> targets;
        BranchTag tag;
    };
    std::vector<ChainJob> jobs;
    std::vector<FcsResult> zero_results;
    for (int A : A_sizes) {
        TwistSpec{0.0, A}.validate(params.L);
        std::vector<double> pos, neg, above_pos, above_neg;
        for (double p : phis) {
            if (p == 0.0) {
                FcsResult r;
                r.phi = 0.0;
                r.A_size = A;
                r.f_per_N = cplx{0.0, 0.0};
                r.converged = true;
                r.meta = baseline.meta;
                zero_results.push_back(std::move(r));
                continue;
            }
            (p > 0 ? pos : neg).push_back(p);
            if (std::abs(p) >= sweep_opts.both_branches_from) {
                // the complementary-winding saddle continues from the other side of +-pi
                (p > 0 ? above_pos : above_neg).push_back(p - (p > 0 ? 2.0 * M_PI : -2.0 * M_PI));
            }
        }
        auto by_abs = [](double a, double b) { return std::abs(a) < std::abs(b); };
        std::sort(pos.begin(), pos.end(), by_abs);
        std::sort(neg.begin(), neg.end(), by_abs);
        std::sort(above_pos.begin(), above_pos.end(), by_abs);
        std::sort(above_neg.begin(), above_neg.end(), by_abs);
        if (!pos.empty()) jobs.push_back({A, pos, BranchTag::FromBelow});
        if (!neg.empty()) jobs.push_back({A, neg, BranchTag::FromBelow});
        if (!above_pos.empty()) jobs.push_back({A, above_pos, BranchTag::FromAbove});
        if (!above_neg.empty()) jobs.push_back({A, above_neg, BranchTag::FromAbove});
    }

    std::vector<std::vector<FcsResult>> job_results(jobs.size());
    const int threads = std::max(1, sweep_opts.threads);
    if (threads == 1 || jobs.size() <= 1) {
        for (size_t i = 0; i < jobs.size(); ++i) {
            run_chain(params, grid, opts, sweep_opts, jobs[i].A, jobs[i].targets, jobs[i].tag,
                      baseline, job_results[i], cache);
        }
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
                run_chain(params, grid, opts, sweep_opts, jobs[i].A, jobs[i].targets, jobs[i].tag,
                          baseline, job_results[i], cache);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<FcsResult> all = std::move(zero_results);
    for (auto& jr : job_results) {
        for (auto& r : jr) all.push_back(std::move(r));
    }
    // mark the min-Re(f) branch primary at each (A, phi)
    std::map<std::pair<int, double>, size_t> best;
    for (size_t i = 0; i < all.size(); ++i) {
        if (!all[i].converged) continue;
        const auto key = std::make_pair(all[i].A_size, all[i].phi);
        auto it = best.find(key);
        if (it == best.end() || all[i].f_per_N.real() < all[it->second].f_per_N.real()) {
            best[key] = i;
        }
    }
    for (size_t i = 0; i < all.size(); ++i) {
        const auto key = std::make_pair(all[i].A_size, all[i].phi);
        auto it = best.find(key);
        all[i].primary = (it != best.end() && it->second == i);
    }
    return all;
}

}  // namespace fcs
