// analysis.hpp — Scaling fits and phase classification from sweep data.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fcs/action.hpp"
#include "fcs/saddle.hpp"

namespace fcs {

// Conformally invariant subsystem size on a ring of L sites.
double chord_length(int A_size, int L);

struct OlsResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double residual_max = 0.0;
};

// Ordinary least squares y = slope*x + intercept. Needs >= 3 points.
OlsResult ols(const std::vector<double>& x, const std::vector<double>& y);

enum class FitModel { LogChord, PhiSquared, OneMinusCos, AreaSaturation };

struct FitReport {
    FitModel model;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double residual_max = 0.0;
    int n_points = 0;
};

// OLS on the transformed abscissa: log of the chord length (LogChord,
// AreaSaturation), phi^2, or 1 - cos phi. Points carry the raw abscissa
// (chord length or phi).
FitReport fit_scaling(const std::vector<std::pair<double, double>>& points, FitModel model);

enum class ScalingClass { LogLaw, AreaLaw };

struct ClassificationReport {
    ScalingClass scaling;
    PhaseLabel phase;
    FitReport log_fit;   // Re f vs log-chord at the classification angle
    FitReport phi_fit;   // Re f vs phi^2 at the classification subsystem
    FitReport cos_fit;   // Re f vs 1 - cos phi at the classification subsystem
    double threshold = 0.0;
    bool degenerate = false;  // flat data (J = 0 style)
};

// Classify a sweep. V maps a log-law onto Critical / VolumeLaw; the slope
// threshold defaults to 10% of the sweep's own maximal log-chord slope unless
// a reference from a zeta scan is supplied.
ClassificationReport classify_from_data(const std::vector<FcsResult>& sweep, int L,
                                        std::optional<double> V = std::nullopt,
                                        std::optional<double> reference_max_slope = std::nullopt);

}  // namespace fcs
