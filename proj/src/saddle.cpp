#include "fcs/saddle.hpp"

#include <algorithm>
#include <cmath>

namespace fcs {

PhaseLabel classify_phase(const ModelParams& params) {
    params.validate();
    PhaseLabel label{};
    if (params.zeta >= params.J) {
        label.kind = PhaseKind::AreaLaw;
    } else if (params.V == 0.0) {
        label.kind = PhaseKind::Critical;
    } else {
        label.kind = PhaseKind::VolumeLaw;
    }
    if (params.zeta == params.J && params.V > 2.0 * params.J) {
        label.transition_order = TransitionOrder::FirstOrder;
    } else if (params.zeta == params.J && params.V < 2.0 * params.J) {
        label.transition_order = TransitionOrder::Continuous;
    } else {
        label.transition_order = TransitionOrder::NotAtBoundary;
    }
    return label;
}

double saddle_residual(double S, const ModelParams& params) {
    const double P = params.zeta / 2.0;
    const double R2 = P * P + S * S;
    const double R = std::sqrt(R2);
    return 1.0 - params.J / (2.0 * R) - params.V / 8.0 * S * S / (R2 * R);
}

namespace {

// Bisection refined by Newton steps on a bracket [lo, hi] with f(lo) < 0 < f(hi)
// or the reverse. f is saddle_residual in S.
double refine_root(double lo, double hi, const ModelParams& params,
                   SaddleDiagnostics* diag) {
    double flo = saddle_residual(lo, params);
    double fhi = saddle_residual(hi, params);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) {
        throw NumericalError("solve_saddle: bracketing failure on [" + std::to_string(lo) +
                             ", " + std::to_string(hi) + "], f = " + std::to_string(flo) +
                             ", " + std::to_string(fhi));
    }
    double a = lo, b = hi, fa = flo;
    int bis = 0;
    for (; bis < 200 && (b - a) > 1e-14 * std::max(1.0, b); ++bis) {
        const double m = 0.5 * (a + b);
        const double fm = saddle_residual(m, params);
        if (fm == 0.0) { a = b = m; break; }
        if (fa * fm < 0.0) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    double s = 0.5 * (a + b);
    // Newton polish; derivative by central difference (residual is smooth).
    int newt = 0;
    for (; newt < 8; ++newt) {
        const double f = saddle_residual(s, params);
        if (std::abs(f) < 1e-15) break;
        const double h = 1e-7 * std::max(1.0, s);
        const double df = (saddle_residual(s + h, params) - saddle_residual(s - h, params)) / (2 * h);
        if (df == 0.0) break;
        const double step = f / df;
        const double s_new = s - step;
        if (s_new < a || s_new > b) break;  // keep the bracket guarantee
        s = s_new;
        if (std::abs(step) < 1e-16) break;
    }
    if (diag) {
        diag->bisection_iters = bis;
        diag->newton_iters = newt;
    }
    return s;
}

}  // namespace

std::vector<double> ordered_branch_roots(const ModelParams& params, SaddleDiagnostics* diag) {
    const double s_max = params.J / 2.0 + params.V / 8.0;
    const int n_scan = 400;
    std::vector<std::pair<double, double>> brackets;
    double prev_s = 0.0;
    double prev_f = saddle_residual(0.0, params);
    for (int i = 1; i <= n_scan; ++i) {
        const double s = s_max * static_cast<double>(i) / n_scan;
        const double f = saddle_residual(s, params);
        if (prev_f == 0.0 || prev_f * f < 0.0) brackets.emplace_back(prev_s, s);
        prev_s = s;
        prev_f = f;
    }
    if (prev_f == 0.0) brackets.emplace_back(prev_s, prev_s);
    std::vector<double> roots;
    roots.reserve(brackets.size());
    for (const auto& [lo, hi] : brackets) {
        roots.push_back(lo == hi ? lo : refine_root(lo, hi, params, diag));
    }
    std::sort(roots.begin(), roots.end());
    if (diag) diag->roots = roots;
    return roots;
}

SaddleParams solve_saddle(const ModelParams& params, SaddleDiagnostics* diag) {
    params.validate();
    SaddleParams out;
    out.z = params.z();
    if (params.zeta >= params.J) {
        out.P = params.zeta - params.J / 2.0;
        out.S = 0.0;
        if (diag) {
            diag->roots.clear();
            diag->residual = 0.0;
        }
        return out;
    }
    out.P = params.zeta / 2.0;
    // Largest nonnegative root of the implicit S-equation on [0, J/2 + V/8].
    std::vector<double> roots = ordered_branch_roots(params, diag);
    if (roots.empty()) {
        throw NumericalError("solve_saddle: no sign change of the S-equation residual on [0, " +
                             std::to_string(params.J / 2.0 + params.V / 8.0) + "] at zeta=" +
                             std::to_string(params.zeta) + ", J=" + std::to_string(params.J) +
                             ", V=" + std::to_string(params.V));
    }
    out.S = roots.back();  // ordered-phase saddle dominates below the first-order boundary
    if (diag) diag->residual = std::abs(saddle_residual(out.S, params));
    return out;
}

Eigen::Matrix2cd greens_frequency(const SaddleParams& saddle, Parity parity, double omega) {
    const double s = parity_sign(parity);
    const double det = omega * omega + saddle.P * saddle.P + saddle.S * saddle.S;
    if (det == 0.0) {
        throw NumericalError("greens_frequency: singular inverse propagator (P=S=omega=0)");
    }
    Eigen::Matrix2cd ginv;
    ginv << -I * omega + s * saddle.P, -saddle.S / saddle.z,
            saddle.z * saddle.S,       I * omega + s * saddle.P;
    // Closed-form adjugate over the real determinant.
    Eigen::Matrix2cd g;
    g << ginv(1, 1), -ginv(0, 1),
        -ginv(1, 0),  ginv(0, 0);
    return g / det;
}

Eigen::Matrix2cd greens_equal_time(const SaddleParams& saddle, Parity parity, EqualTimeSide side) {
    const double s = parity_sign(parity);
    const double R = std::hypot(saddle.P, saddle.S);
    if (R == 0.0) {
        throw NumericalError("greens_equal_time: singular at P=S=0");
    }
    // Residues of [[i w + s P, S/z], [-z S, -i w + s P]] / (w^2 + R^2): the
    // off-diagonal entries are continuous, the diagonals jump by +-1.
    Eigen::Matrix2cd g;
    const double off_ud = saddle.S / saddle.z / (2.0 * R);
    const double off_du = -saddle.z * saddle.S / (2.0 * R);
    if (side == EqualTimeSide::Plus) {
        g << (R + s * saddle.P) / (2.0 * R), off_ud,
             off_du, (s * saddle.P - R) / (2.0 * R);
    } else {
        g << (s * saddle.P - R) / (2.0 * R), off_ud,
             off_du, (R + s * saddle.P) / (2.0 * R);
    }
    return g;
}

}  // namespace fcs
