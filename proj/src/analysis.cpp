#include "fcs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fcs {

double chord_length(int A_size, int L) {
    if (!(A_size > 0 && A_size < L)) throw ConfigError("chord_length: need 0 < A_size < L");
    return L * std::sin(M_PI * A_size / L) / M_PI;
}

OlsResult ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ConfigError("ols: size mismatch");
    const int n = static_cast<int>(x.size());
    if (n < 3) throw ConfigError("ols: need at least 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    OlsResult r;
    if (denom == 0.0) throw ConfigError("ols: degenerate abscissa");
    r.slope = (n * sxy - sx * sy) / denom;
    r.intercept = (sy - r.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / n;
    for (int i = 0; i < n; ++i) {
        const double e = y[i] - (r.slope * x[i] + r.intercept);
        ss_res += e * e;
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
        r.residual_max = std::max(r.residual_max, std::abs(e));
    }
    if (ss_tot == 0.0) {
        r.r_squared = (ss_res == 0.0) ? 1.0 : 0.0;
    } else {
        r.r_squared = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
    }
    return r;
}

FitReport fit_scaling(const std::vector<std::pair<double, double>>& points, FitModel model) {
    if (points.size() < 3) throw ConfigError("fit_scaling: need at least 3 points");
    std::vector<double> x, y;
    x.reserve(points.size());
    y.reserve(points.size());
    for (const auto& [raw, val] : points) {
        switch (model) {
            case FitModel::LogChord:
            case FitModel::AreaSaturation:
                if (!(raw > 0)) throw ConfigError("fit_scaling: chord length must be > 0");
                x.push_back(std::log(raw));
                break;
            case FitModel::PhiSquared:
                x.push_back(raw * raw);
                break;
            case FitModel::OneMinusCos:
                x.push_back(1.0 - std::cos(raw));
                break;
        }
        y.push_back(val);
    }
    const OlsResult r = ols(x, y);
    FitReport out;
    out.model = model;
    out.slope = r.slope;
    out.intercept = r.intercept;
    out.r_squared = r.r_squared;
    out.residual_max = r.residual_max;
    out.n_points = static_cast<int>(points.size());
    return out;
}

ClassificationReport classify_from_data(const std::vector<FcsResult>& sweep, int L,
                                        std::optional<double> V,
                                        std::optional<double> reference_max_slope) {
    // usable rows: primary, converged, interior subsystems
    std::map<double, std::vector<std::pair<double, double>>> by_phi;   // phi -> (chord, Re f)
    std::map<int, std::vector<std::pair<double, double>>> by_A;       // A -> (phi, Re f)
    for (const auto& r : sweep) {
        if (!r.converged || !r.primary) continue;
        if (r.A_size <= 0 || r.A_size >= L) continue;
        if (r.phi != 0.0 && std::abs(r.phi) <= M_PI / 2.0 + 1e-12) {
            by_phi[r.phi].emplace_back(chord_length(r.A_size, L), r.f_per_N.real());
            by_A[r.A_size].emplace_back(r.phi, r.f_per_N.real());
        }
    }
    // classification angle: largest |phi| <= pi/2 with >= 4 subsystem sizes
    double phi_star = 0.0;
    size_t best_n = 0;
    for (const auto& [phi, pts] : by_phi) {
        if (pts.size() >= 4 && (std::abs(phi) > std::abs(phi_star) || best_n < 4)) {
            phi_star = phi;
            best_n = pts.size();
        }
    }
    // classification subsystem: closest to L/2 with >= 4 angles
    int A_star = -1;
    for (const auto& [A, pts] : by_A) {
        if (pts.size() >= 4 && (A_star < 0 || std::abs(A - L / 2) < std::abs(A_star - L / 2))) {
            A_star = A;
        }
    }
    if (best_n < 4 || A_star < 0) {
        throw ConfigError("classify_from_data: need >= 4 subsystem sizes at fixed phi and >= 4 angles at fixed A");
    }

    ClassificationReport rep{};
    rep.log_fit = fit_scaling(by_phi[phi_star], FitModel::LogChord);
    rep.phi_fit = fit_scaling(by_A[A_star], FitModel::PhiSquared);
    rep.cos_fit = fit_scaling(by_A[A_star], FitModel::OneMinusCos);

    const double slope = std::abs(rep.log_fit.slope);
    double fscale = 0.0;
    for (const auto& [c, f] : by_phi[phi_star]) fscale = std::max(fscale, std::abs(f));
    rep.degenerate = (fscale < 1e-12) || (slope < 1e-12 * std::max(1.0, fscale));
    rep.threshold = 0.1 * (reference_max_slope ? *reference_max_slope : slope);

    if (!rep.degenerate && slope > rep.threshold && rep.log_fit.r_squared > 0.98) {
        rep.scaling = ScalingClass::LogLaw;
    } else {
        rep.scaling = ScalingClass::AreaLaw;
    }
    if (rep.scaling == ScalingClass::LogLaw) {
        rep.phase.kind = (V && *V > 0.0) ? PhaseKind::VolumeLaw : PhaseKind::Critical;
    } else {
        rep.phase.kind = PhaseKind::AreaLaw;
    }
    rep.phase.transition_order = TransitionOrder::NotAtBoundary;
    return rep;
}

}  // namespace fcs
