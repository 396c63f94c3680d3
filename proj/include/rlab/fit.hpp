#pragma once

#include <vector>

namespace rlab {

// Least squares line through (log x, log y).
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<double> residuals;  // log y - fitted, per point
    bool stabilized = false;        // r_squared >= 0.98
};

constexpr double kMinRSquared = 0.98;

FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rlab
